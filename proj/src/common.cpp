#include "common.hpp"

#include <algorithm>

namespace sphlab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "Ok";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_prime: return "NotPrime";
    case errc::empty_sequence: return "EmptySequence";
    case errc::dimension_too_small: return "DimensionTooSmall";
    case errc::invalid_exponent: return "InvalidExponent";
    case errc::insufficient_data: return "InsufficientData";
    case errc::overflow: return "Overflow";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

std::string count_to_string(Count v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace sphlab
