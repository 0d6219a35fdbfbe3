#pragma once

// Finite-N certificates for the rational-approximant argument.
//
// Given a circle map phi and a grid T_N, Dirichlet approximation yields
// phi_N(2 pi j/N) = 2 pi P_j / Q close to phi. The four-term combination
//
//   Phi_N(x, y, z) = phi_N(x) + phi_N(z - x) - phi_N(y) - phi_N(z - y)
//
// (grid indices, z - x taken mod N) always lies in (2 pi / Q) Z, which makes
// E_N = {e^{i Phi_N} = 1} decidable in integers and gives the exact identity
// (1/Q) sum_{n<Q} e^{i n Phi_N} = 1_{E_N}. The certificates below check each
// inequality of the chain at desk scale. The Dirichlet parameter D is
// independent of N; every bound carries the factor 2 pi N / D and reduces to
// the classical constants when D = N.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhlab/circle_maps.hpp"
#include "bhlab/config.hpp"
#include "bhlab/cyclic_fourier.hpp"
#include "bhlab/diophantine.hpp"
#include "bhlab/outcome.hpp"
#include "bhlab/section_measure.hpp"

namespace bhlab {

/// phi_N on T_N: value j is angles[j]; for a genuine sampling
/// angles[j] == 2 pi numerators[j] / Q.
struct RationalSampling {
  std::size_t N = 1;
  std::int64_t Q = 1;
  std::int64_t D = 1;
  std::vector<std::int64_t> numerators;
  std::vector<double> angles;
  /// max_j |lift(2 pi j/N) - angles[j]|
  double sup_error = 0.0;

  /// Certified bound 2 pi / (D Q) on sup_error.
  double sup_error_bound() const;
};

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(SimultaneousApprox best);
  const SimultaneousApprox& best() const { return best_; }

 private:
  SimultaneousApprox best_;
};

/// alpha_j = lift(2 pi j/N) / (2 pi) fed to the Dirichlet solver. Throws
/// BudgetExhausted (carrying the best Q) when the budget runs out, and
/// std::logic_error if the recomputed certificate fails.
RationalSampling build_phi_N(const CircleMap& map, std::size_t N, std::int64_t D, std::int64_t budget);

/// Sampling from explicit data (fixtures). When `angles` is omitted they are
/// 2 pi P_j / Q. sup_error is recomputed against `map`.
RationalSampling make_rational_sampling(const CircleMap& map, std::int64_t Q, std::int64_t D,
                                        std::vector<std::int64_t> numerators,
                                        std::optional<std::vector<double>> angles = std::nullopt);

/// e^{i n phi_N} on T_N with n P_j reduced mod Q in integers.
CyclicFunction exp_sample_rational(const RationalSampling& phi, std::int64_t n);

/// Header "n,norm": ||e^{in phi_N}||_{A(T_N)} for n = 0 .. min(Q, n_cap) - 1.
void write_phiN_norms_csv(std::ostream& out, const RationalSampling& phi, std::int64_t n_cap = 1 << 16);

struct ThetaTable {
  std::size_t N = 1;
  /// values[n] = max_{l <= n} ||e^{i l phi}||_{A(T_N)}
  std::vector<double> values;
};

ThetaTable theta_table(const CircleMap& map, std::size_t N, std::int64_t n_max);

struct ApproximantNormReport {
  std::int64_t n_checked = 0;
  double max_sup_diff = 0.0;    // max_n ||e^{in phi} - e^{in phi_N}||_{L^inf(T_N)}
  double max_a_diff = 0.0;      // max_n ||e^{in phi} - e^{in phi_N}||_{A(T_N)}
  double max_phiN_norm = 0.0;   // max_n ||e^{in phi_N}||_{A(T_N)}
  double a_diff_bound = 0.0;    // 2 pi N / D
  // Smallest (bound - value) seen for each link of the chain.
  double slack_sup = 0.0;       // sup diff <= n * sup_error <= 2 pi n / (D Q)
  double slack_a = 0.0;         // A diff <= N * sup diff <= 2 pi N / D
  double slack_norm = 0.0;      // ||e^{in phi_N}|| <= ||e^{in phi}|| + 2 pi N / D
  bool classical_form_checked = false;  // D == N
  double slack_classical = 0.0;     // ||e^{in phi_N}|| <= Theta(n) + 2 pi <= 8 Theta(n)
  double max_factor = 0.0;      // max_n ||e^{in phi_N}|| / Theta(n), compare with 8
  bool holds = false;
  double worst_slack() const;
};

/// Checks n = 0 .. min(Q, n_cap) - 1.
ApproximantNormReport approximant_norm_certificate(const CircleMap& map, const RationalSampling& phi, std::int64_t n_cap = 1 << 16);

/// Subset of T_N^3 indexed (x, y, z) -> (x N + y) N + z.
class TripleGridSet {
 public:
  TripleGridSet(std::size_t N, std::vector<std::uint8_t> membership);

  std::size_t order() const { return n_; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return (x * n_ + y) * n_ + z; }
  bool contains(std::size_t x, std::size_t y, std::size_t z) const { return members_[index(x, y, z)] != 0; }
  std::span<const std::uint8_t> membership() const { return members_; }
  std::size_t count() const;
  double measure() const;
  double delta() const { return delta_of(measure()); }
  ProductSubset as_product_subset() const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> members_;
};

/// (x, y, z) in E_N iff P(x) + P(z-x) - P(y) - P(z-y) = 0 (mod Q). Integer
/// arithmetic only. Skipped when N^3 exceeds caps.triple_grid.
Outcome<TripleGridSet> build_E_N(const RationalSampling& phi, const Caps& caps = {});

struct IdentityCheck {
  double max_deviation = 0.0;
  bool holds = false;
};

/// Evaluates (1/Q) sum_{n<Q} e^{i n Phi_N} at every triple from the angles of
/// phi and compares with 1_E. Skipped when Q N^3 exceeds caps.identity_work.
Outcome<IdentityCheck> indicator_identity_check(const RationalSampling& phi, const TripleGridSet& e,
                                                const Caps& caps = {});

struct AutocorrBound {
  double lhs = 0.0;        // ||e^{inf}||_A^{-2}
  double rhs = 0.0;        // Re of the triple average of e^{inF}
  double rhs_imag = 0.0;
  double a4_fourth = 0.0;  // ||e^{inf}||_{A_4}^4, equal to the triple average
  bool holds = false;
  double slack() const { return rhs - lhs; }
};

/// Throws std::invalid_argument if f is not real.
AutocorrBound autocorr_lower_bound(const CyclicFunction& f, std::int64_t n);

struct InterpolationReport {
  double a1 = 0.0, a2 = 0.0, a4 = 0.0;
  double rhs = 0.0;  // a1^{1/3} a4^{2/3}
  bool holds = false;
  double slack() const { return rhs - a2; }
};

InterpolationReport interpolation_check(const CyclicFunction& f, std::int64_t n);

struct LevelSetMeasureReport {
  double measure = 0.0;          // mu(E_N)
  double M = 0.0;                // max_{n<Q} ||e^{in phi_N}||_{A(T_N)}
  double sharp_bound = 0.0;      // 1 / M^2
  double averaged_bound = 0.0;   // (1/Q) sum_n ||e^{in phi_N}||^{-2}
  bool sharp_holds = false;
  std::optional<double> theta;   // Theta(Q-1) on T_N, when supplied
  std::optional<double> parameterized_bound;  // 1 / ((1 + 2 pi N/D)^2 Theta^2)
  std::optional<double> classical_bound;          // 1 / (64 Theta^2), meaningful for D == N
  bool classical_form_applicable = false;
  bool classical_holds = true;
  bool holds() const { return sharp_holds && classical_holds; }
};

LevelSetMeasureReport level_set_measure_certificate(const RationalSampling& phi, const TripleGridSet& e,
                                std::optional<double> theta = std::nullopt);

struct AxisSurvey {
  double max_delta = 0.0;
  double max_a_norm = 0.0;  // max ||1_section||_{A(T_N)}
};

struct SectionSurvey {
  AxisSurvey axes[3];
  double max_section_delta = 0.0;
  double delta = 0.0;  // delta(E)
  double bound = 0.0;  // 9 * max_section_delta
  bool holds = false;
  /// ||1_section||_A <= M^2 for every section, when M is supplied.
  std::optional<double> norm_cap;
  bool norm_cap_holds = true;
};

SectionSurvey section_bound_survey(const TripleGridSet& e, std::optional<double> M = std::nullopt);

/// Grid average of |e^{i Phi} - 1| with Phi built from the lift. Winding
/// contributions are integer multiples of 2 pi and drop out, so Phi is formed
/// from the periodic part; for linear maps it vanishes identically.
double final_integral(const CircleMap& map, std::size_t N);

// --- end-to-end run ---------------------------------------------------------

struct PipelineConfig {
  MapSpec map;
  std::size_t N = 6;
  std::int64_t D = 3;
  std::int64_t budget = 1'000'000;
  std::int64_t norm_check_cap = 1 << 16;
  Caps caps;
};

struct PipelineRun {
  nlohmann::json report;
  bool certificates_pass = false;
};

/// build_phi_N -> approximant norms -> E_N -> identity -> level-set measure ->
/// sections -> final
/// integral. Caps and budget exhaustion are recorded as skips.
PipelineRun run_pipeline(const CircleMap& map, const PipelineConfig& cfg);

/// Same chain starting from a given sampling (fixtures).
PipelineRun run_pipeline(const CircleMap& map, const RationalSampling& phi, const PipelineConfig& cfg);

}  // namespace bhlab
