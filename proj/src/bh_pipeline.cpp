#include "bhlab/bh_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace bhlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

double recompute_sup_error(const CircleMap& map, std::size_t N, std::span<const double> angles) {
  const auto lift = sample_lift(map, N);
  double worst = 0.0;
  for (std::size_t j = 0; j < N; ++j) worst = std::max(worst, std::abs(lift[j] - angles[j]));
  return worst;
}

}  // namespace

double RationalSampling::sup_error_bound() const {
  return kTwoPi / (static_cast<double>(D) * static_cast<double>(Q));
}

BudgetExhausted::BudgetExhausted(SimultaneousApprox best)
    : std::runtime_error("Dirichlet search exhausted its budget (best Q = " + std::to_string(best.Q) +
                         ", error " + std::to_string(best.max_error) + ")"),
      best_(std::move(best)) {}

RationalSampling build_phi_N(const CircleMap& map, std::size_t N, std::int64_t D, std::int64_t budget) {
  if (N == 0) throw std::invalid_argument("build_phi_N: N must be >= 1");
  const auto lift = sample_lift(map, N);
  std::vector<double> alphas(N);
  for (std::size_t j = 0; j < N; ++j) alphas[j] = lift[j] / kTwoPi;
  auto approx = simultaneous_approx(alphas, D, budget);
  if (approx.budget_exhausted) throw BudgetExhausted(std::move(approx));
  if (!verify_approx(alphas, D, approx).ok())
    throw std::logic_error("build_phi_N: Dirichlet certificate failed on recomputation");

  RationalSampling phi = make_rational_sampling(map, approx.Q, D, std::move(approx.numerators));
  double scale = 1.0;
  for (double v : lift) scale = std::max(scale, std::abs(v));
  if (phi.sup_error > phi.sup_error_bound() + 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw std::logic_error("build_phi_N: sup-error certificate failed");
  return phi;
}

RationalSampling make_rational_sampling(const CircleMap& map, std::int64_t Q, std::int64_t D,
                                        std::vector<std::int64_t> numerators,
                                        std::optional<std::vector<double>> angles) {
  if (Q < 1) throw std::invalid_argument("rational sampling: Q must be >= 1");
  if (D < 1) throw std::invalid_argument("rational sampling: D must be >= 1");
  if (numerators.empty()) throw std::invalid_argument("rational sampling: need at least one numerator");
  RationalSampling phi;
  phi.N = numerators.size();
  phi.Q = Q;
  phi.D = D;
  if (angles) {
    if (angles->size() != phi.N) throw std::invalid_argument("rational sampling: one angle per numerator");
    phi.angles = std::move(*angles);
  } else {
    phi.angles.resize(phi.N);
    for (std::size_t j = 0; j < phi.N; ++j)
      phi.angles[j] = kTwoPi * static_cast<double>(numerators[j]) / static_cast<double>(Q);
  }
  phi.numerators = std::move(numerators);
  phi.sup_error = recompute_sup_error(map, phi.N, phi.angles);
  return phi;
}

CyclicFunction exp_sample_rational(const RationalSampling& phi, std::int64_t n) {
  std::vector<cplx> v(phi.N);
  const auto q = static_cast<__int128>(phi.Q);
  for (std::size_t j = 0; j < phi.N; ++j) {
    __int128 r = (static_cast<__int128>(n) * phi.numerators[j]) % q;
    if (r < 0) r += q;
    v[j] = std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(phi.Q));
  }
  return CyclicFunction(std::move(v));
}

void write_phiN_norms_csv(std::ostream& out, const RationalSampling& phi, std::int64_t n_cap) {
  out << "n,norm\n";
  const std::int64_t limit = std::min(phi.Q, std::max<std::int64_t>(n_cap, 0));
  for (std::int64_t n = 0; n < limit; ++n)
    out << fmt::format("{},{}\n", n, n == 0 ? 1.0 : a_norm(exp_sample_rational(phi, n)));
}

ThetaTable theta_table(const CircleMap& map, std::size_t N, std::int64_t n_max) {
  if (n_max < 0) throw std::invalid_argument("theta_table: n_max must be >= 0");
  ThetaTable t;
  t.N = N;
  t.values.reserve(static_cast<std::size_t>(n_max) + 1);
  // ||1||_{A(T_N)} = 1
  double running = 1.0;
  t.values.push_back(running);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    running = std::max(running, a_norm(exp_sample(map, n, N)));
    t.values.push_back(running);
  }
  return t;
}

double ApproximantNormReport::worst_slack() const {
  double w = std::min({slack_sup, slack_a, slack_norm});
  if (classical_form_checked) w = std::min(w, slack_classical);
  return w;
}

ApproximantNormReport approximant_norm_certificate(const CircleMap& map, const RationalSampling& phi, std::int64_t n_cap) {
  ApproximantNormReport r;
  const auto N = static_cast<double>(phi.N);
  const auto D = static_cast<double>(phi.D);
  const auto Q = static_cast<double>(phi.Q);
  r.a_diff_bound = kTwoPi * N / D;
  r.classical_form_checked = phi.D == static_cast<std::int64_t>(phi.N);
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.slack_sup = r.slack_a = r.slack_norm = r.slack_classical = inf;
  double theta = 1.0;
  const std::int64_t limit = std::min(phi.Q, std::max<std::int64_t>(n_cap, 0));
  for (std::int64_t n = 0; n < limit; ++n) {
    const auto g = exp_sample(map, n, phi.N);
    const auto h = exp_sample_rational(phi, n);
    const auto diff = subtract(g, h);
    const double sup_diff = sup_norm(diff);
    const double a_diff = a_norm(diff);
    const double norm_phi = n == 0 ? 1.0 : a_norm(g);
    const double norm_phiN = a_norm(h);
    theta = std::max(theta, norm_phi);
    const auto nd = static_cast<double>(n);

    r.max_sup_diff = std::max(r.max_sup_diff, sup_diff);
    r.max_a_diff = std::max(r.max_a_diff, a_diff);
    r.max_phiN_norm = std::max(r.max_phiN_norm, norm_phiN);
    r.max_factor = std::max(r.max_factor, norm_phiN / theta);

    const double scaled_sup = nd * phi.sup_error;
    r.slack_sup = std::min({r.slack_sup, scaled_sup - sup_diff, kTwoPi * nd / (D * Q) - scaled_sup});
    r.slack_a = std::min({r.slack_a, N * sup_diff - a_diff, r.a_diff_bound - N * sup_diff});
    r.slack_norm = std::min(r.slack_norm, norm_phi + r.a_diff_bound - norm_phiN);
    if (r.classical_form_checked)
      r.slack_classical = std::min({r.slack_classical, theta + kTwoPi - norm_phiN, 8.0 * theta - (theta + kTwoPi)});
    ++r.n_checked;
  }
  if (r.n_checked == 0) r.slack_sup = r.slack_a = r.slack_norm = r.slack_classical = 0.0;
  r.holds = r.worst_slack() >= -kTol.inequality;
  return r;
}

// --- E_N --------------------------------------------------------------------

TripleGridSet::TripleGridSet(std::size_t N, std::vector<std::uint8_t> membership)
    : n_(N), members_(std::move(membership)) {
  if (N == 0 || members_.size() != N * N * N)
    throw std::invalid_argument("TripleGridSet: membership must have N^3 entries");
}

std::size_t TripleGridSet::count() const {
  return static_cast<std::size_t>(std::count_if(members_.begin(), members_.end(), [](auto m) { return m != 0; }));
}

double TripleGridSet::measure() const {
  return static_cast<double>(count()) / static_cast<double>(members_.size());
}

ProductSubset TripleGridSet::as_product_subset() const {
  return ProductSubset(FiniteProductSpace({n_, n_, n_}), members_);
}

Outcome<TripleGridSet> build_E_N(const RationalSampling& phi, const Caps& caps) {
  const std::size_t N = phi.N;
  const auto cells = static_cast<std::uint64_t>(N) * N * N;
  if (cells > caps.triple_grid)
    return Skipped{"N^3 = " + std::to_string(cells) + " exceeds the triple-grid cap " + std::to_string(caps.triple_grid)};
  std::vector<std::int64_t> res(N);
  for (std::size_t j = 0; j < N; ++j) res[j] = mod_floor(phi.numerators[j], phi.Q);
  std::vector<std::uint8_t> m(cells);
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t z = 0; z < N; ++z) {
        const std::int64_t s =
            res[x] + res[(z + N - x) % N] - res[y] - res[(z + N - y) % N];
        m[(x * N + y) * N + z] = mod_floor(s, phi.Q) == 0;
      }
  return TripleGridSet(N, std::move(m));
}

Outcome<IdentityCheck> indicator_identity_check(const RationalSampling& phi, const TripleGridSet& e,
                                                const Caps& caps) {
  const std::size_t N = phi.N;
  if (e.order() != N) throw std::invalid_argument("indicator_identity_check: grid order mismatch");
  const auto cells = static_cast<std::uint64_t>(N) * N * N;
  const auto work = static_cast<long double>(cells) * static_cast<long double>(phi.Q);
  if (work > static_cast<long double>(caps.identity_work))
    return Skipped{"Q * N^3 = " + std::to_string(static_cast<double>(work)) + " exceeds the identity cap " +
                   std::to_string(caps.identity_work)};
  IdentityCheck out;
  const auto& a = phi.angles;
  const double inv_q = 1.0 / static_cast<double>(phi.Q);
  constexpr std::int64_t kReanchor = 64;
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t z = 0; z < N; ++z) {
        const double big_phi = (a[x] + a[(z + N - x) % N]) - (a[y] + a[(z + N - y) % N]);
        const cplx step = std::polar(1.0, big_phi);
        cplx term = 1.0;
        cplx acc = 0.0;
        for (std::int64_t n = 0; n < phi.Q; ++n) {
          if (n % kReanchor == 0) term = std::polar(1.0, static_cast<double>(n) * big_phi);
          acc += term;
          term *= step;
        }
        acc *= inv_q;
        const double target = e.contains(x, y, z) ? 1.0 : 0.0;
        out.max_deviation = std::max(out.max_deviation, std::abs(acc - target));
      }
  out.holds = out.max_deviation <= kTol.identity;
  return out;
}

// --- Kahane's inequality on T_N ----------------------------------------------

AutocorrBound autocorr_lower_bound(const CyclicFunction& f, std::int64_t n) {
  if (!f.is_real(kTol.real_part)) throw std::invalid_argument("autocorr_lower_bound: f must be real");
  const std::size_t N = f.order();
  const auto fr = f.real_values();
  const auto nd = static_cast<double>(n);
  std::vector<cplx> g(N);
  for (std::size_t j = 0; j < N; ++j) g[j] = std::polar(1.0, nd * fr[j]);
  const Spectrum s = dft(CyclicFunction(g));
  const double a1 = lp_norm(s.coeffs(), 1.0);

  AutocorrBound r;
  r.lhs = 1.0 / (a1 * a1);
  for (cplx c : s.coeffs()) r.a4_fourth += std::norm(c) * std::norm(c);

  // direct average of e^{i n F(x,y,z)} over T_N^3
  cplx acc = 0.0;
  for (std::size_t z = 0; z < N; ++z) {
    cplx inner = 0.0;
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = 0; y < N; ++y) {
        const double F = fr[x] + fr[(z + N - x) % N] - fr[y] - fr[(z + N - y) % N];
        inner += std::polar(1.0, nd * F);
      }
    acc += inner;
  }
  acc /= static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(N);
  r.rhs = acc.real();
  r.rhs_imag = acc.imag();
  r.holds = r.lhs <= r.rhs + kTol.inequality;
  return r;
}

InterpolationReport interpolation_check(const CyclicFunction& f, std::int64_t n) {
  if (!f.is_real(kTol.real_part)) throw std::invalid_argument("interpolation_check: f must be real");
  const auto fr = f.real_values();
  std::vector<cplx> g(fr.size());
  for (std::size_t j = 0; j < fr.size(); ++j) g[j] = std::polar(1.0, static_cast<double>(n) * fr[j]);
  const Spectrum s = dft(CyclicFunction(std::move(g)));
  InterpolationReport r;
  r.a1 = lp_norm(s.coeffs(), 1.0);
  r.a2 = lp_norm(s.coeffs(), 2.0);
  r.a4 = lp_norm(s.coeffs(), 4.0);
  r.rhs = std::cbrt(r.a1) * std::pow(r.a4, 2.0 / 3.0);
  r.holds = r.a2 <= r.rhs + kTol.inequality;
  return r;
}

// --- measure of E_N -----------------------------------------------------------

LevelSetMeasureReport level_set_measure_certificate(const RationalSampling& phi, const TripleGridSet& e, std::optional<double> theta) {
  if (e.order() != phi.N) throw std::invalid_argument("level_set_measure_certificate: grid order mismatch");
  LevelSetMeasureReport r;
  r.measure = e.measure();
  double inv_sq_sum = 0.0;
  for (std::int64_t n = 0; n < phi.Q; ++n) {
    const double norm = n == 0 ? 1.0 : a_norm(exp_sample_rational(phi, n));
    r.M = std::max(r.M, norm);
    inv_sq_sum += 1.0 / (norm * norm);
  }
  r.sharp_bound = 1.0 / (r.M * r.M);
  r.averaged_bound = inv_sq_sum / static_cast<double>(phi.Q);
  r.sharp_holds = r.measure >= r.sharp_bound - kTol.inequality && r.measure >= r.averaged_bound - kTol.inequality;
  r.classical_form_applicable = phi.D == static_cast<std::int64_t>(phi.N);
  if (theta) {
    const double th = *theta;
    const double factor = 1.0 + kTwoPi * static_cast<double>(phi.N) / static_cast<double>(phi.D);
    r.theta = th;
    r.parameterized_bound = 1.0 / (factor * factor * th * th);
    r.classical_bound = 1.0 / (64.0 * th * th);
    const bool param_ok = r.measure >= *r.parameterized_bound - kTol.inequality;
    const bool classical_ok = r.measure >= *r.classical_bound - kTol.inequality;
    r.classical_holds = param_ok && (!r.classical_form_applicable || classical_ok);
  }
  return r;
}

// --- sections -----------------------------------------------------------------

SectionSurvey section_bound_survey(const TripleGridSet& e, std::optional<double> M) {
  const std::size_t N = e.order();
  SectionSurvey s;
  std::vector<cplx> ind(N);
  for (std::size_t axis = 0; axis < 3; ++axis) {
    AxisSurvey& out = s.axes[axis];
    for (std::size_t u = 0; u < N; ++u)
      for (std::size_t v = 0; v < N; ++v) {
        std::size_t count = 0;
        for (std::size_t w = 0; w < N; ++w) {
          bool in = false;
          switch (axis) {
            case 0: in = e.contains(w, u, v); break;  // E^{y,z}
            case 1: in = e.contains(u, w, v); break;  // E^{x,z}
            default: in = e.contains(u, v, w); break; // E^{x,y}
          }
          ind[w] = in ? 1.0 : 0.0;
          count += in;
        }
        const double mu = static_cast<double>(count) / static_cast<double>(N);
        out.max_delta = std::max(out.max_delta, delta_of(mu));
        out.max_a_norm = std::max(out.max_a_norm, a_norm(CyclicFunction(ind)));
      }
    s.max_section_delta = std::max(s.max_section_delta, out.max_delta);
  }
  const SectionBoundCheck section_check = section_bound_check(e.as_product_subset());
  s.delta = e.delta();
  s.bound = 9.0 * s.max_section_delta;
  s.holds = section_check.holds && s.delta <= s.bound + kTol.probability &&
            std::abs(section_check.delta0 - s.max_section_delta) <= 1e-12;
  if (M) {
    s.norm_cap = (*M) * (*M);
    for (const auto& a : s.axes) s.norm_cap_holds = s.norm_cap_holds && a.max_a_norm <= *s.norm_cap + kTol.inequality;
  }
  return s;
}

double final_integral(const CircleMap& map, std::size_t N) {
  if (N == 0) throw std::invalid_argument("final_integral: N must be >= 1");
  std::vector<double> p(N);
  for (std::size_t j = 0; j < N; ++j) p[j] = map.periodic_part(kTwoPi * static_cast<double>(j) / static_cast<double>(N));
  double total = 0.0;
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y) {
      double row = 0.0;
      for (std::size_t z = 0; z < N; ++z) {
        const double big_phi = (p[x] + p[(z + N - x) % N]) - (p[y] + p[(z + N - y) % N]);
        row += 2.0 * std::abs(std::sin(0.5 * big_phi));
      }
      total += row;
    }
  return total / (static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(N));
}

// --- end-to-end -----------------------------------------------------------------

namespace {

nlohmann::json approximant_norm_json(const ApproximantNormReport& r) {
  return {{"n_checked", r.n_checked},
          {"max_sup_diff", r.max_sup_diff},
          {"max_a_diff", r.max_a_diff},
          {"a_diff_bound", r.a_diff_bound},
          {"max_phiN_norm", r.max_phiN_norm},
          {"slack_sup", r.slack_sup},
          {"slack_a", r.slack_a},
          {"slack_norm", r.slack_norm},
          {"classical_form_checked", r.classical_form_checked},
          {"slack_classical", r.classical_form_checked ? nlohmann::json(r.slack_classical) : nlohmann::json(nullptr)},
          {"max_factor", r.max_factor},
          {"holds", r.holds}};
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json skipped_json(const std::string& reason) { return {{"status", "skipped"}, {"reason", reason}}; }

}  // namespace

PipelineRun run_pipeline(const CircleMap& map, const PipelineConfig& cfg) {
  try {
    const RationalSampling phi = build_phi_N(map, cfg.N, cfg.D, cfg.budget);
    PipelineRun run = run_pipeline(map, phi, cfg);
    run.report["phi_N"]["dirichlet_certificate"] = true;
    return run;
  } catch (const BudgetExhausted& ex) {
    PipelineRun run;
    auto& r = run.report;
    r["inputs"] = {{"map", to_json(map.spec())}, {"N", cfg.N}, {"D", cfg.D}, {"budget", cfg.budget}};
    r["phi_N"] = {{"status", "skipped"},
                  {"reason", ex.what()},
                  {"best_Q", ex.best().Q},
                  {"best_error", ex.best().max_error}};
    for (const char* stage : {"approximant_norms", "E_N", "identity", "level_set_measure", "sections"})
      r[stage] = skipped_json("no rational sampling");
    r["final_integral"] = final_integral(map, cfg.N);
    r["skipped"] = {"phi_N"};
    r["certificates_pass"] = true;
    run.certificates_pass = true;
    return run;
  }
}

PipelineRun run_pipeline(const CircleMap& map, const RationalSampling& phi, const PipelineConfig& cfg) {
  PipelineRun run;
  auto& r = run.report;
  bool pass = true;
  nlohmann::json skipped = nlohmann::json::array();

  r["inputs"] = {{"map", to_json(map.spec())}, {"N", phi.N}, {"D", phi.D}, {"budget", cfg.budget}};

  double scale = 1.0;
  for (double v : sample_lift(map, phi.N)) scale = std::max(scale, std::abs(v));
  const bool sup_ok = phi.sup_error <= phi.sup_error_bound() + 64.0 * std::numeric_limits<double>::epsilon() * scale;
  pass = pass && sup_ok;
  r["phi_N"] = {{"status", "ok"},
                {"Q", phi.Q},
                {"numerators", phi.numerators},
                {"sup_error", phi.sup_error},
                {"sup_error_bound", phi.sup_error_bound()},
                {"sup_error_certified", sup_ok},
                {"dirichlet_certificate", nullptr}};

  const ApproximantNormReport l1 = approximant_norm_certificate(map, phi, cfg.norm_check_cap);
  pass = pass && l1.holds;
  r["approximant_norms"] = approximant_norm_json(l1);
  r["approximant_norms"]["status"] = "ok";

  const auto e = build_E_N(phi, cfg.caps);
  if (!e) {
    for (const char* stage : {"E_N", "identity", "level_set_measure", "sections"}) r[stage] = skipped_json(e.reason());
    skipped.push_back("E_N");
  } else {
    const std::size_t N = phi.N;
    bool diagonal = true, symmetric = true;
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = 0; y < N; ++y)
        for (std::size_t z = 0; z < N; ++z) {
          if (x == y && !e->contains(x, y, z)) diagonal = false;
          if (e->contains(x, y, z) != e->contains(y, x, z)) symmetric = false;
        }
    pass = pass && diagonal && symmetric;
    r["E_N"] = {{"status", "ok"},
                {"count", e->count()},
                {"measure", e->measure()},
                {"delta", e->delta()},
                {"contains_diagonal", diagonal},
                {"swap_symmetric", symmetric}};

    const auto id = indicator_identity_check(phi, *e, cfg.caps);
    if (id) {
      pass = pass && id->holds;
      r["identity"] = {{"status", "ok"}, {"max_deviation", id->max_deviation}, {"holds", id->holds}};
    } else {
      r["identity"] = skipped_json(id.reason());
      skipped.push_back("identity");
    }

    std::optional<double> theta;
    if (phi.Q <= cfg.norm_check_cap) theta = theta_table(map, phi.N, phi.Q - 1).values.back();
    const LevelSetMeasureReport l2 = level_set_measure_certificate(phi, *e, theta);
    pass = pass && l2.holds();
    r["level_set_measure"] = {{"status", "ok"},
                   {"measure", l2.measure},
                   {"M", l2.M},
                   {"sharp_bound", l2.sharp_bound},
                   {"averaged_bound", l2.averaged_bound},
                   {"sharp_holds", l2.sharp_holds},
                   {"theta", optional_json(l2.theta)},
                   {"parameterized_bound", optional_json(l2.parameterized_bound)},
                   {"classical_bound", optional_json(l2.classical_bound)},
                   {"classical_form_applicable", l2.classical_form_applicable},
                   {"classical_holds", l2.classical_holds},
                   {"slack", l2.measure - l2.sharp_bound}};

    const SectionSurvey s = section_bound_survey(*e, l2.M);
    pass = pass && s.holds && s.norm_cap_holds;
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : s.axes) axes.push_back({{"max_delta", a.max_delta}, {"max_a_norm", a.max_a_norm}});
    r["sections"] = {{"status", "ok"},
                     {"axes", axes},
                     {"max_section_delta", s.max_section_delta},
                     {"delta", s.delta},
                     {"bound", s.bound},
                     {"holds", s.holds},
                     {"norm_cap", optional_json(s.norm_cap)},
                     {"norm_cap_holds", s.norm_cap_holds}};
  }

  r["final_integral"] = final_integral(map, phi.N);
  r["skipped"] = skipped;
  r["certificates_pass"] = pass;
  run.certificates_pass = pass;
  return run;
}

}  // namespace bhlab
