#pragma once

#include <utility>

#include "common.hpp"

namespace testutil {

// Runs f and reports the error code it throws (errc::ok if it returns).
template <typename F>
sphlab::errc code_of(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const sphlab::Error& e) {
        return e.code();
    }
    return sphlab::errc::ok;
}

}  // namespace testutil
