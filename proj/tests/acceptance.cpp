// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// argv[1] must point at the CLI binary (used by the determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grid.hpp"
#include "lattice.hpp"
#include "probes.hpp"
#include "report.hpp"
#include "sequence.hpp"

using namespace sphlab;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void run_criterion(int id, const std::string& desc, double budget_seconds,
                   const std::function<std::string()>& body) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (ok && budget_seconds > 0 && elapsed > budget_seconds) {
        ok = false;
        detail = "time budget exceeded";
    }
    if (!ok) ++g_failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << desc;
    line << " [" << elapsed << "s";
    if (!detail.empty()) line << "; " << detail;
    line << "]";
    std::cout << line.str() << std::endl;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

std::uint64_t as_u64(Count c) { return static_cast<std::uint64_t>(c); }

GridFunction random_sparse(std::mt19937_64& rng, int d, bool nonnegative) {
    std::uniform_int_distribution<int> size_dist(3, 12);
    std::uniform_int_distribution<std::int32_t> coord(-20, 20);
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    int n = size_dist(rng);
    std::vector<std::int32_t> coords;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) coords.push_back(coord(rng));
        double v = mag(rng);
        if (!nonnegative && (rng() & 1)) v = -v;
        values.push_back(v);
    }
    return GridFunction::from_records(d, std::move(coords), std::move(values));
}

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_cli(const std::string& command) {
    CliRun r;
    std::string full = command + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    r.status = pclose(pipe);
    return r;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    run_criterion(1, "exact counting and enumeration agree across dimensions 4-6", 30.0, [] {
        std::uint64_t points = 0;
        for (int d : {4, 5, 6}) {
            auto table = count_reps_upto(d, 300);
            for (std::int64_t lam = 0; lam <= 300; ++lam) {
                Count single = count_reps({d, lam});
                require(single == table.at(lam), "table and single-radius counts differ");
                auto flat = enumerate_sphere({d, lam});
                std::uint64_t n = flat.size() / static_cast<std::uint64_t>(d);
                require(n == as_u64(single), "enumeration length differs from the count");
                points += n;
            }
        }
        auto t4 = count_reps_upto(4, 2000);
        for (std::int64_t n = 0; n <= 2000; ++n)
            require(t4.at(n) == jacobi_r4(n), "divisor identity mismatch at n=" + std::to_string(n));
        return "enumerated " + std::to_string(points) + " points";
    });

    run_criterion(2, "dimension-four degenerate counts stay at 24 on powers of four", 0, [] {
        std::int64_t lam = 1;
        for (int k = 1; k <= 6; ++k) {
            lam *= 4;
            require(as_u64(count_reps({4, lam})) == 24, "count differs at 4^" + std::to_string(k));
            require(as_u64(jacobi_r4(lam)) == 24, "identity differs at 4^" + std::to_string(k));
        }
        return std::string("k = 1..6 all 24");
    });

    run_criterion(3, "operator identities hold on 100 random inputs", 0, [] {
        int checked = 0;
        for (int i = 0; i < 100; ++i) {
            std::mt19937_64 rng(1000 + i);
            int d = (i % 2 == 0) ? 4 : 5;
            auto f = random_sparse(rng, d, false);

            require(average(f, 0) == f, "radius-0 average is not the identity");

            std::uniform_int_distribution<std::int64_t> lam_dist(1, 50);
            std::int64_t l1 = lam_dist(rng);
            std::int64_t l2 = lam_dist(rng);
            if (l1 == l2) l2 = l1 % 50 + 1;
            if (l1 > l2) std::swap(l1, l2);

            auto g = random_sparse(rng, d, true);
            double mass = lp_norm(g, 1.0).value;
            double mass_avg = lp_norm(average(g, l2), 1.0).value;
            require(std::fabs(mass_avg - mass) <= 1e-12 * mass, "mass not preserved");

            std::vector<std::int64_t> shift(d);
            std::uniform_int_distribution<std::int64_t> sh(-9, 9);
            for (auto& s : shift) s = sh(rng);
            require(average(translate(f, shift), l1) == translate(average(f, l1), shift),
                    "translation equivariance broken");

            std::vector<int> perm(d);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<int> signs(d);
            for (auto& s : signs) s = (rng() & 1) ? 1 : -1;
            require(average(signed_permute(f, perm, signs), l1) ==
                        signed_permute(average(f, l1), perm, signs),
                    "symmetry equivariance broken");

            auto m1 = maximal_over(f, {l1});
            auto m2 = maximal_over(f, {l1, l2});
            for (std::size_t r = 0; r < m1.support_size(); ++r) {
                std::vector<std::int64_t> pt(m1.point(r), m1.point(r) + d);
                require(m2.value_at(pt.data()) >= m1.value(r),
                        "maximal function not monotone in the radius set");
            }
            ++checked;
        }
        return std::to_string(checked) + " inputs, tolerance 1e-12";
    });

    run_criterion(4, "critical exponents come out as exact rationals", 0, [] {
        for (int d = 5; d <= 10; ++d) {
            auto full = compute_eta(
                assemble_eta_inputs(make_naturals(100), d, EtaMode::declared, {2, 3}, 8, 6));
            require(full.eta_exact && *full.eta_exact == Rat(d, d - 2),
                    "full sequence exponent differs at d=" + std::to_string(d));

            DeclaredDims dims;
            dims.per_prime[2] = Rat(1);
            dims.delta_inf = Rat(0);
            auto lac = make_sequence("lacunary-model", make_geometric(3, 40).terms, dims);
            auto thin =
                compute_eta(assemble_eta_inputs(lac, d, EtaMode::declared, {2}, 8, 6));
            require(thin.eta_exact && *thin.eta_exact == Rat(d, d - 1),
                    "residue-dense thin exponent differs at d=" + std::to_string(d));
        }
        auto sq = compute_eta(
            assemble_eta_inputs(make_squares(10000), 5, EtaMode::declared, {2}, 8, 6));
        require(sq.eta_exact && *sq.eta_exact == Rat(4, 3), "squares exponent differs");
        return std::string("d/(d-2), d/(d-1) for d = 5..10, and 4/3");
    });

    run_criterion(5, "point-mass closed forms match grid evaluation on random sequences", 120.0,
                  [] {
                      Caps caps;
                      caps.max_sphere_points = 80'000'000;
                      const std::vector<double> ps = {1.0, 1.25, 1.5, 2.0};
                      double worst = 0.0;
                      for (int inst = 0; inst < 25; ++inst) {
                          std::mt19937_64 rng(42 + inst);
                          std::vector<std::int64_t> pool(2000);
                          std::iota(pool.begin(), pool.end(), 1);
                          const int n = 5 + (inst * 45) / 24;
                          for (int i = 0; i < n; ++i) {
                              std::size_t j =
                                  static_cast<std::size_t>(i) + rng() % (pool.size() - i);
                              std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
                          }
                          std::vector<BigInt> terms(pool.begin(), pool.begin() + n);
                          std::sort(terms.begin(), terms.end());
                          auto seq = make_sequence("random-subset", std::move(terms));
                          auto results = delta_test_multi(5, seq, ps, caps);
                          for (const auto& r : results) {
                              require(r.direct.has_value(),
                                      "grid evaluation skipped on instance " +
                                          std::to_string(inst));
                              worst = std::max(worst, *r.relative_gap);
                              if (r.p == 1.0)
                                  require(r.closed_form == static_cast<double>(n),
                                          "p=1 bound is not the sphere count");
                          }
                      }
                      require(worst <= 1e-10, "worst gap " + fmt(worst) + " above 1e-10");
                      return "25 instances, 4 exponents, worst gap " + fmt(worst);
                  });

    run_criterion(6, "partial-sum slopes bracket the divergence threshold", 60.0, [] {
        Caps caps;
        caps.max_sieve_work = 200'000'000;
        auto seq = make_naturals(100000);
        const std::vector<std::int64_t> schedule = {10000, 20000, 50000, 100000};

        auto below = divergence_slope(5, seq, true, schedule, 1.5, caps);
        require(std::fabs(below.slope - 0.25) <= 0.10,
                "slope at p=3/2 is " + fmt(below.slope));

        auto critical = divergence_slope(5, seq, true, schedule, 5.0 / 3.0, caps);
        require(std::fabs(critical.slope) <= 0.08,
                "slope at p=5/3 is " + fmt(critical.slope));

        auto above = divergence_slope(5, seq, true, schedule, 2.0, caps);
        double growth = std::exp(above.log_sums.back() - above.log_sums.front()) - 1.0;
        require(growth < 0.01, "p=2 partial sums grew by " + fmt(growth));

        return "slopes " + fmt(below.slope) + " / " + fmt(critical.slope) + ", p=2 growth " +
               fmt(growth);
    });

    run_criterion(7, "periodic torus ratios concentrate along a residue cover", 300.0, [] {
        auto seq = make_padic_cover(2, 3, 1.4, 7);
        require(seq.terms.back() <= BigInt(10000), "cover exceeds the radius budget");
        auto probe = periodic_padic_probe(5, seq, 2, 3, 1.1);
        require(probe.ratios.size() == 3, "expected three stages");
        require(probe.ratios[0] < probe.ratios[1] && probe.ratios[1] < probe.ratios[2],
                "ratios are not strictly increasing: " + fmt(probe.ratios[0]) + ", " +
                    fmt(probe.ratios[1]) + ", " + fmt(probe.ratios[2]));

        auto single = periodic_padic_probe(5, make_sequence("one", {BigInt(1)}), 2, 1, 1.0);
        require(std::fabs(single.ratios[0] - 1.0) <= 1e-12,
                "singleton q=1 ratio is " + fmt(single.ratios[0]));
        return "ratios " + fmt(probe.ratios[0]) + " < " + fmt(probe.ratios[1]) + " < " +
               fmt(probe.ratios[2]);
    });

    run_criterion(8, "dimension estimators are exact on synthetic data, accurate on real", 0, [] {
        std::vector<ProfileScale> powers;
        for (int j = 1; j <= 10; ++j) powers.push_back({j, std::uint64_t(1) << j});
        auto unit = estimate_dimension(powers, std::log(2.0), 10);
        require(std::fabs(unit.value - 1.0) <= 1e-12, "exact power law missed");
        auto half = estimate_dimension(powers, std::log(4.0), 10);
        require(std::fabs(half.value - 0.5) <= 1e-12, "exact half-slope missed");

        std::vector<ProfileScale> flat{{1, 9}, {2, 9}, {3, 9}, {4, 9}};
        require(estimate_dimension(flat, std::log(2.0), 4).value == 0.0,
                "constant profile not exactly zero");

        auto pw = make_geometric(2, 2001);
        auto dense = padic_profile(pw, 3, 10, 8);
        require(std::fabs(dense.estimate.value - 1.0) <= 0.1,
                "odd-prime density estimate " + fmt(dense.estimate.value));
        auto thin = padic_profile(pw, 2, 30, 8);
        require(std::fabs(thin.estimate.value) <= 0.1,
                "base-prime density estimate " + fmt(thin.estimate.value));
        return "synthetic exact; geometric estimates " + fmt(dense.estimate.value) + " and " +
               fmt(thin.estimate.value);
    });

    run_criterion(9, "command-line output is byte-identical across runs and thread counts", 0,
                  [&cli] {
                      require(!cli.empty(), "pass the CLI binary path as argv[1]");

                      {
                          std::ofstream out("acc9_cover.json");
                          out << dump_json(sequence_to_json(make_padic_cover(2, 3, 1.4, 7)));
                      }
                      {
                          std::ofstream out("acc9_nat.json");
                          out << dump_json(sequence_to_json(make_naturals(1000)));
                      }
                      {
                          std::ofstream out("acc9_sq.json");
                          out << dump_json(sequence_to_json(make_squares(100)));
                      }

                      const std::vector<std::string> commands = {
                          "count --d 5 --max-lambda 5000",
                          "enumerate --d 4 --lambda 12",
                          "enumerate --d 4 --lambda 16 --modulus 2",
                          "generate --family padic_cover --prime 2 --stages 3 --growth 1.4 "
                          "--seed 7",
                          "analyze --seq acc9_cover.json --prime 2 --jmax 12 --window 6",
                          "eta --seq acc9_nat.json --d 5 --declared --prime 2 --prime 3",
                          "probe-delta --seq acc9_sq.json --d 5 --p 1.5",
                          "probe-slope --seq acc9_nat.json --d 5 --p 1.5 "
                          "--schedule 100,200,500,1000",
                          "probe-padic --seq acc9_cover.json --d 5 --prime 2 --level 3 --q 1.1",
                      };

                      int executions = 0;
                      for (const auto& cmd : commands) {
                          std::string reference;
                          bool have_reference = false;
                          for (int threads : {1, 4}) {
                              for (int rep = 0; rep < 3; ++rep) {
                                  std::string full = "\"" + cli + "\" " + cmd + " --threads " +
                                                     std::to_string(threads);
                                  auto r = run_cli(full);
                                  ++executions;
                                  require(r.status == 0, "nonzero exit from: " + full);
                                  require(!r.out.empty(), "empty output from: " + full);
                                  if (!have_reference) {
                                      reference = r.out;
                                      have_reference = true;
                                  } else {
                                      require(r.out == reference,
                                              "output drift in: " + full);
                                  }
                              }
                          }
                      }

                      std::remove("acc9_cover.json");
                      std::remove("acc9_nat.json");
                      std::remove("acc9_sq.json");
                      return std::to_string(executions) + " executions byte-compared";
                  });

    if (g_failures == 0) {
        std::cout << "all criteria passed" << std::endl;
        return 0;
    }
    std::cout << g_failures << " criteria failed" << std::endl;
    return 1;
}
