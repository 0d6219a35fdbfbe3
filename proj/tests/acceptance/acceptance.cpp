// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <fmt/format.h>

#include "bhlab/bh_pipeline.hpp"
#include "bhlab/conv_operators.hpp"
#include "bhlab/cyclic_fourier.hpp"
#include "bhlab/diophantine.hpp"
#include "bhlab/norm_growth.hpp"
#include "bhlab/section_measure.hpp"
#include "oracles.hpp"

using namespace bhlab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: no limit stated
  std::function<Verdict()> run;
};

std::vector<CircleMap> families() { return {make_linear(1, 0.0), make_smooth(1, 0.5), make_tent()}; }

double rel(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  return oracle::max_abs_diff(got, want) / std::max(1.0, oracle::max_abs(want));
}

std::vector<cplx> vec(std::span<const cplx> s) { return {s.begin(), s.end()}; }

// 1. transforms against quadratic sums
Verdict fourier() {
  oracle::Gen g(1001);
  double worst = 0, worst_parseval = 0;
  for (int i = 0; i < 500; ++i) {
    const auto n = static_cast<std::size_t>(g.integer(3, 1024));
    const auto a = g.complex_vector(n), b = g.complex_vector(n);
    const CyclicFunction fa(a), fb(b);
    const Spectrum sa = dft(fa);
    worst = std::max(worst, rel(vec(sa.coeffs()), oracle::naive_dft(a)));
    worst = std::max(worst, rel(vec(idft(Spectrum(a)).values()), oracle::naive_idft(a)));
    worst = std::max(worst, rel(vec(convolve(fa, fb).values()), oracle::naive_cyclic_convolution(a, b)));
    double ms = 0;
    for (auto c : a) ms += std::norm(c);
    const double l2 = std::sqrt(ms / static_cast<double>(n));
    worst_parseval = std::max(worst_parseval, std::abs(lp_norm(sa.coeffs(), 2) - l2) / l2);
  }
  return {worst <= 1e-10 && worst_parseval <= 1e-10,
          fmt::format("worst relative error {:.2e}, Parseval {:.2e}", worst, worst_parseval)};
}

struct PipelineCell {
  std::string family;
  std::size_t N;
  std::int64_t D;
  RationalSampling phi;
  TripleGridSet e;
};

// Pipeline runs shared by criteria 2 and 4.
const std::vector<PipelineCell>& pipeline_cells() {
  static const std::vector<PipelineCell> cells = [] {
    std::vector<PipelineCell> out;
    const std::vector<std::string> names{"linear", "smooth", "tent"};
    const auto maps = families();
    for (std::size_t f = 0; f < maps.size(); ++f)
      for (std::size_t N = 4; N <= 8; ++N)
        for (std::int64_t D = 2; D <= 4; ++D) {
          auto phi = build_phi_N(maps[f], N, D, 1'000'000);
          auto e = build_E_N(phi);
          out.push_back({names[f], N, D, std::move(phi), *e});
        }
    return out;
  }();
  return cells;
}

// 2. averaged characters reproduce the indicator
Verdict identity() {
  double worst = 0;
  int checked = 0, skipped = 0;
  for (const auto& c : pipeline_cells()) {
    const auto id = indicator_identity_check(c.phi, c.e);
    const double work = static_cast<double>(c.phi.Q) * std::pow(static_cast<double>(c.N), 3);
    if (!id) {
      if (work <= 1e7) return {false, fmt::format("{} N={} D={} skipped below the work cap", c.family, c.N, c.D)};
      ++skipped;
      continue;
    }
    ++checked;
    worst = std::max(worst, id->max_deviation);
  }
  return {worst <= 1e-9, fmt::format("{} runs checked, {} above the work cap, max deviation {:.2e}", checked,
                                     skipped, worst)};
}

// 3. autocorrelation lower bound and the A_4 identity
Verdict autocorr() {
  oracle::Gen g(1003);
  double worst_slack = 1e300, worst_a4 = 0;
  for (std::size_t N = 4; N <= 16; ++N)
    for (int trial = 0; trial < 200; ++trial) {
      const auto f = g.real_vector(N, -std::numbers::pi, std::numbers::pi);
      const auto cf = CyclicFunction::from_real(f);
      for (std::int64_t n = 0; n <= 8; ++n) {
        const auto r = autocorr_lower_bound(cf, n);
        worst_slack = std::min(worst_slack, r.slack());
        std::vector<cplx> h(N);
        for (std::size_t j = 0; j < N; ++j) h[j] = std::polar(1.0, static_cast<double>(n) * f[j]);
        double a4 = 0;
        for (auto c : oracle::naive_dft(h)) a4 += std::pow(std::abs(c), 4);
        worst_a4 = std::max(worst_a4, std::abs(r.rhs - a4) / a4);
      }
    }
  return {worst_slack >= -1e-9 && worst_a4 <= 1e-8,
          fmt::format("min slack {:.3e}, A4 identity relative error {:.2e}", worst_slack, worst_a4)};
}

// 4. measure of the level set against the maximal grid norm
Verdict level_set_measure() {
  double worst_sharp = 1e300, worst_classical = 1e300;
  int runs = 0;
  for (const auto& c : pipeline_cells()) {
    const auto& phi = c.phi;
    double M = 0;
    for (std::int64_t n = 0; n < phi.Q; ++n) {
      const auto f = exp_sample_rational(phi, n);
      M = std::max(M, oracle::l1(oracle::naive_dft(vec(f.values()))));
    }
    const CircleMap m = c.family == "linear" ? make_linear(1, 0) : c.family == "smooth" ? make_smooth(1, 0.5)
                                                                                         : make_tent();
    const double theta = theta_table(m, c.N, phi.Q - 1).values.back();
    const double mu = c.e.measure();
    worst_sharp = std::min(worst_sharp, mu - 1 / (M * M));
    if (theta >= 1) worst_classical = std::min(worst_classical, mu - 1 / (64 * theta * theta));
    const auto r = level_set_measure_certificate(phi, c.e, theta);
    if (std::abs(r.M - M) > 1e-9 * M) return {false, fmt::format("M mismatch at {} N={} D={}", c.family, c.N, c.D)};
    ++runs;
  }
  return {worst_sharp >= -1e-9 && worst_classical >= -1e-9,
          fmt::format("{} runs, min mu - 1/M^2 = {:.3e}, min mu - 1/(64 Theta^2) = {:.3e}", runs, worst_sharp,
                      worst_classical)};
}

// 5. section bound, exhaustive and random, plus the two-factor chain
Verdict sections() {
  std::uint64_t violations = 0, subsets = 0;
  const FiniteProductSpace s44({4, 4});
  for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
    std::vector<std::uint8_t> m(16);
    for (std::size_t i = 0; i < 16; ++i) m[i] = (mask >> i) & 1u;
    violations += !section_bound_check(ProductSubset(s44, std::move(m))).holds;
    ++subsets;
  }
  oracle::Gen g(1005);
  const FiniteProductSpace s333({3, 3, 3});
  for (int t = 0; t < 100'000; ++t) {
    violations += !section_bound_check(ProductSubset(s333, g.bits(27))).holds;
    ++subsets;
  }
  int traces = 0, trace_failures = 0, draws = 0;
  while (traces < 10'000) {
    ++draws;
    std::vector<std::vector<double>> w(2);
    for (auto& f : w) {
      f.resize(static_cast<std::size_t>(g.integer(2, 6)));
      double total = 0;
      for (auto& x : f) total += (x = g.uniform(0.05, 1.0));
      for (auto& x : f) x /= total;
    }
    const FiniteProductSpace sp(w);
    // skewed densities so that small section deltas are common
    const double p = std::pow(g.uniform(0, 1), 3);
    std::vector<std::uint8_t> m(sp.cells());
    for (auto& b : m) b = g.uniform(0, 1) < p;
    if (g.uniform(0, 1) < 0.5)
      for (auto& b : m) b ^= 1u;
    const ProductSubset e(sp, std::move(m));
    if (max_section_delta(e) >= 0.5) continue;
    ++traces;
    trace_failures += !two_factor_inequality_trace(e).all_hold();
  }
  return {violations == 0 && trace_failures == 0,
          fmt::format("{} subsets, {} violations; {} traces ({} draws), {} failures", subsets, violations, traces,
                      draws, trace_failures)};
}

// 6. Dirichlet solver guarantee and minimality
Verdict dirichlet() {
  oracle::Gen g(1006);
  int bad_bound = 0, bad_min = 0;
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(g.integer(1, 4));
    const auto D = g.integer(1, 6);
    const auto a = g.real_vector(n, -5, 5);
    const auto budget = dirichlet_range(D, n);
    const auto r = simultaneous_approx(a, D, budget);
    if (r.budget_exhausted || !verify_approx(a, D, r).ok() || r.max_error * static_cast<double>(D) > 1 + 1e-12)
      ++bad_bound;
    if (r.Q != oracle::exhaustive_dirichlet(a, D, budget)) ++bad_min;
  }
  return {bad_bound == 0 && bad_min == 0,
          fmt::format("200 tuples, {} bound failures, {} minimality mismatches", bad_bound, bad_min)};
}

// 7. growth laws on the circle
Verdict growth() {
  std::vector<std::string> notes;
  bool ok = true;
  for (const auto& m : {make_linear(1, 0), make_linear(-2, 0.7), make_linear(3, 1.1)})
    for (std::int64_t n = 1; n <= 1024; ++n)
      if (circle_a_norm(m, n, 1e-6).value != 1.0) ok = false;
  notes.push_back(ok ? "(a) linear norms all 1" : "(a) linear norm differs from 1");

  std::vector<std::int64_t> ns;
  for (std::int64_t n = 16; n <= 1024; n *= 2) ns.push_back(n);
  const auto smooth = growth_table(make_smooth(1, 0.5), ns, 1e-6);
  const auto pf = fit_growth(smooth, GrowthModel::power);
  const bool b = pf.points == ns.size() && pf.exponent >= 0.4 && pf.exponent <= 0.6;
  notes.push_back(fmt::format("(b) smooth exponent {:.4f} over {} converged", pf.exponent, pf.points));

  const auto tent = growth_table(make_tent(), ns, 1e-4);
  const auto lf = fit_growth(tent, GrowthModel::log), tf = fit_growth(tent, GrowthModel::power);
  const bool c = lf.points == ns.size() && lf.residual < tf.residual;
  notes.push_back(fmt::format("(c) tent log residual {:.3e} vs power {:.3e}", lf.residual, tf.residual));
  return {ok && b && c, fmt::format("{}; {}; {}", notes[0], notes[1], notes[2])};
}

// 8. operator powers
Verdict operators() {
  bool delta_ok = true;
  for (std::int64_t off : {-3, 0, 5}) {
    const auto p = power_norms(Kernel::delta(off), 64);
    for (const auto& e : *p) delta_ok = delta_ok && e.norm == 1.0;
  }
  oracle::Gen g(1008);
  double worst_sub = 1e300;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::pair<std::int64_t, cplx>> terms;
    const auto k = g.integer(1, 10);
    for (std::int64_t i = 0; i < k; ++i) terms.emplace_back(g.integer(-15, 15), cplx(g.uniform(-1, 1), g.uniform(-1, 1)));
    const auto p = power_norms(Kernel(std::move(terms)), 10);
    for (std::size_t i = 0; i < p->size(); ++i)
      for (std::size_t j = 0; i + j < p->size(); ++j) {
        const double rhs = (*p)[i].norm * (*p)[j].norm;
        worst_sub = std::min(worst_sub, (rhs - (*p)[i + j].norm) / std::max(1.0, rhs));
      }
  }
  double worst_excess = -1e300;
  for (const auto& m : {make_smooth(1, 0.5), make_smooth(2, 1.0), make_smooth(1, 1.5)}) {
    const double tol = 1e-8;
    const auto p = power_norms(kernel_from_map(m, 512), 16);
    for (const auto& e : *p) {
      if (e.n == 0) continue;
      const auto c = circle_a_norm(m, e.n, tol);
      const double allowed = e.tail_mass + tol * c.value + std::abs(c.tail_estimate);
      worst_excess = std::max(worst_excess, std::abs(e.norm - c.value) - allowed);
    }
  }
  return {delta_ok && worst_sub >= -1e-9 && worst_excess <= 0,
          fmt::format("delta powers {}, submultiplicative slack {:.2e}, cross-module excess {:.2e}",
                      delta_ok ? "all 1" : "not all 1", worst_sub, worst_excess)};
}

// 9. Riemann sums of the closing integral
Verdict final_limit() {
  bool linear_zero = true;
  for (std::size_t N = 1; N <= 256; N = N < 16 ? N + 1 : 2 * N)
    for (const auto& m : {make_linear(1, 0), make_linear(2, 0.3), make_linear(0, 1.0), make_linear(-3, 2.0)})
      linear_zero = linear_zero && final_integral(m, N) == 0.0;
  // the sum is cubic in N, so the doubling ladder stops at 512
  const auto m = make_smooth(1, 0.5);
  std::vector<double> ladder;
  for (std::size_t N = 64; N <= 512; N *= 2) ladder.push_back(final_integral(m, N));
  double worst_step = 0;
  for (std::size_t i = 1; i < ladder.size(); ++i) worst_step = std::max(worst_step, std::abs(ladder[i] - ladder[i - 1]));
  const double last = ladder.back();
  return {linear_zero && worst_step < 0.01 && last > 0,
          fmt::format("linear {}, smooth max |I(N) - I(2N)| = {:.2e}, limit {:.10f}", linear_zero ? "0" : "nonzero",
                      worst_step, last)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. seeded commands twice through the executable
Verdict determinism() {
  const std::vector<std::string> cmds{
      "pipeline --map smooth --N 7 --D 3 --seed 4",
      "pipeline --map tent --N 6 --D 4 --seed 4 --format csv",
      "growth --map smooth --n-min 16 --n-max 256 --seed 4 --format json",
      "sections --mode random --shape 3x3x3 --trials 5000 --seed 4",
      "littlewood --strategy random_sets --primes 17,31,61 --trials 2000 --seed 4",
      "littlewood --strategy intervals --primes 17,31 --seed 4 --format json",
      "operators --map smooth --n-max 12 --seed 4",
  };
  const auto dir = std::filesystem::temp_directory_path() / "bhlab_acceptance";
  std::filesystem::create_directories(dir);
  int differing = 0, failed = 0;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / fmt::format("run{}_{}", i, k);
      const std::string cmd = fmt::format("{} {} --out {} 2>/dev/null", BHLAB_BINARY, cmds[i], out.string());
      const int raw = std::system(cmd.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) ++failed;
      outputs[k] = slurp(out);
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) ++differing;
  }
  std::filesystem::remove_all(dir);
  return {differing == 0 && failed == 0,
          fmt::format("{} commands, {} differing, {} nonzero exits", cmds.size(), differing, failed)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Fourier correctness", 10, fourier},
      {2, "indicator identity", 60, identity},
      {3, "autocorrelation inequality", 120, autocorr},
      {4, "level-set measure bound", 0, level_set_measure},
      {5, "section bound", 60, sections},
      {6, "Dirichlet guarantee", 30, dirichlet},
      {7, "growth laws", 300, growth},
      {8, "operator powers", 60, operators},
      {9, "final-limit behavior", 30, final_limit},
      {10, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s == 0 || secs < c.time_limit_s;
    const bool pass = v.pass && in_time;
    failures += !pass;
    const std::string limit = c.time_limit_s > 0 ? fmt::format(" / {:.0f}s", c.time_limit_s) : "";
    std::cout << fmt::format("{} criterion {:2} {}: {} [{:.2f}s{}]{}\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail,
                             secs, limit, in_time ? "" : " over time limit")
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria pass\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
