#pragma once

#include <cstdint>

namespace bhlab {

/// Numerical tolerances shared by every module. All comparisons against a
/// theoretical identity or inequality go through one of these constants.
struct Tolerances {
  /// dft/idft/convolve agreement with the quadratic oracle (relative).
  double transform = 1e-10;
  /// |e^{i n phi}| = 1 on sampled grids.
  double unimodular = 1e-12;
  /// Identity (1/Q) sum_n e^{in Phi_N} = 1_E and other "exact in theory" sums.
  double identity = 1e-9;
  /// Slack allowed on inequalities whose two sides are float computations.
  double inequality = 1e-9;
  /// Tolerance for the closed-form endpoint check lift(2pi) - lift(0) = 2 pi nu.
  double winding = 1e-12;
  /// Rounding slack for Dirichlet bounds |alpha Q - P| <= 1/D.
  double dirichlet = 1e-12;
  /// Probability vectors must sum to one within this.
  double probability = 1e-12;
  /// Mean-zero test for Green-Konyagin inputs.
  double mean_zero = 1e-10;
  /// Imaginary residue accepted for a function declared real.
  double real_part = 1e-12;
  /// Kernel weights below this magnitude are dropped and counted as tail mass.
  double kernel_prune = 1e-14;
};

/// Work caps. Operations that would exceed one return a typed "skipped"
/// outcome instead of running.
struct Caps {
  /// Maximum number of grid triples N^3 for E_N and the section survey.
  std::uint64_t triple_grid = std::uint64_t{1} << 24;
  /// Maximum Q * N^3 for the indicator identity check.
  std::uint64_t identity_work = 10'000'000;
  /// Maximum grid size used by circle_a_norm's doubling sequence.
  std::uint64_t circle_grid = std::uint64_t{1} << 20;
  /// Resolution rule constant: M0 >= resolution * (1 + |n| L).
  std::uint64_t resolution = 16;
  /// Maximum kernel support while iterating operator powers.
  std::uint64_t kernel_support = std::uint64_t{1} << 20;
};

inline constexpr Tolerances kTol{};

}  // namespace bhlab
