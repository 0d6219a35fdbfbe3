#pragma once

// Dirichlet simultaneous approximation: for reals alpha_1..alpha_N and an
// integer D >= 1 there is 1 <= Q <= D^N with |alpha_j Q - P_j| <= 1/D for
// integers P_j. The solver scans Q upward and returns the smallest such Q.

#include <cstdint>
#include <span>
#include <vector>

namespace bhlab {

struct SimultaneousApprox {
  std::int64_t Q = 1;
  std::vector<std::int64_t> numerators;
  /// max_j |alpha_j Q - P_j|.
  double max_error = 0.0;
  /// No Q within the budget met the 1/D bound; Q is then the best one seen.
  bool budget_exhausted = false;
};

/// D^N saturated at INT64_MAX.
std::int64_t dirichlet_range(std::int64_t D, std::size_t count);

/// Nearest integer, halves rounded away from zero.
std::int64_t nearest_integer(double x);

/// Smallest Q in [1, min(D^N, budget)] with max_j dist(alpha_j Q, Z) <= 1/D
/// and P_j the nearest integers. Throws std::invalid_argument on empty alphas,
/// D < 1 or budget < 1.
SimultaneousApprox simultaneous_approx(std::span<const double> alphas, std::int64_t D, std::int64_t budget);

struct ApproxCertificate {
  double recomputed_error = 0.0;
  bool error_matches = false;   // stored max_error agrees with the recomputation
  bool within_bound = false;    // recomputed error <= 1/D
  bool q_in_range = false;      // 1 <= Q <= D^N
  bool ok() const { return error_matches && within_bound && q_in_range; }
};

/// Recomputes everything from scratch; the pipeline uses it as a certificate.
ApproxCertificate verify_approx(std::span<const double> alphas, std::int64_t D, const SimultaneousApprox& result);

}  // namespace bhlab
