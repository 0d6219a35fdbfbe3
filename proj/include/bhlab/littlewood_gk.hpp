#pragma once

// Minimum modulus versus A-norm on Z_N for prime N.
//
// For real mean-zero f on T_N the ratio min_t |f(t)| / ||f||_{A(T_N)} is at
// most 1; for prime N it is known to be O((log log N / log N)^{1/3}) with an
// unspecified constant. For characteristic functions the analogous quantity
// is delta(E) / ||1_E||_{A(T_N)}. Nothing here asserts a constant: the search
// emits ratios next to the envelope so the trend can be read off a table.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bhlab/cyclic_fourier.hpp"

namespace bhlab {

bool is_prime(std::uint64_t n);

/// min_t |f(t)| / ||f||_{A(T_N)}. Throws std::invalid_argument when f is not
/// real, not mean-zero (|mean| > 1e-10), or identically zero.
double gk_ratio(const CyclicFunction& f);

struct CharDelta {
  double measure = 0.0;  // mu(E), the zeroth coefficient of 1_E
  double delta = 0.0;
  double a_norm = 0.0;   // ||1_E||_{A(T_N)}
  double ratio = 0.0;    // delta / a_norm, 0 for the empty set
};

/// members[j] != 0 iff j in E.
CharDelta char_delta_ratio(std::span<const std::uint8_t> members);

/// (log log N / log N)^{1/3}, defined for N >= 17.
std::optional<double> gk_envelope(std::uint64_t N);
/// 1 / log N, reported on the same range as gk_envelope.
std::optional<double> alt_envelope(std::uint64_t N);

enum class SearchStrategy { random_sets, intervals, quadratic_residues };

std::string_view to_string(SearchStrategy s);
/// Throws std::invalid_argument on an unknown name.
SearchStrategy parse_strategy(std::string_view name);

struct GKRecord {
  std::uint64_t N = 0;
  SearchStrategy strategy = SearchStrategy::intervals;
  std::vector<std::uint8_t> witness;  // best set E
  CharDelta best;
  /// gk_ratio of 1_E - mu(E); absent for the empty and full set.
  std::optional<double> min_modulus_ratio;
  std::optional<double> envelope;
  std::optional<double> alt_envelope;
  std::size_t candidates = 0;
};

/// Hex of sum_{j in E} 2^j, most significant digit first, "0x" prefixed.
std::string witness_hex(std::span<const std::uint8_t> members);

/// Maximizes delta(E) / ||1_E||_A over the strategy's family:
///   intervals           every [a, b) with 0 <= a < b <= N - 1
///   quadratic_residues  residues, non-residues (each with and without 0) and
///                       {x : x^2 mod N < k} for k = 1..N-1
///   random_sets         `trials` subsets drawn bitwise from mt19937_64(seed)
/// Ratios within 1e-12 relative count as ties, broken by the lexicographically
/// smallest sorted element list. Throws std::invalid_argument unless N is
/// prime.
GKRecord extremal_search(std::uint64_t N, SearchStrategy strategy, std::size_t trials = 0, std::uint64_t seed = 0);

/// Header "N,strategy,best_ratio,envelope,alt_envelope,witness"; NA marks an
/// envelope outside its range.
void write_gk_csv(std::ostream& out, std::span<const GKRecord> records);

}  // namespace bhlab
