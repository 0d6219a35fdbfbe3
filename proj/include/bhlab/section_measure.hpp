#pragma once

// Finite products of probability spaces and the section bound: if every
// axis-section of E has delta <= delta0 then delta(E) <= 3^{m-1} delta0, where
// delta(E) = min(mu(E), 1 - mu(E)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bhlab {

/// delta(E) = min(mu, 1 - mu).
inline double delta_of(double measure) { return measure < 1.0 - measure ? measure : 1.0 - measure; }

class FiniteProductSpace {
 public:
  /// Uniform weights on each factor.
  explicit FiniteProductSpace(std::vector<std::size_t> sizes);
  /// Explicit probability vectors, one per factor.
  explicit FiniteProductSpace(std::vector<std::vector<double>> weights);

  std::size_t factors() const { return weights_.size(); }
  std::size_t size(std::size_t axis) const { return weights_.at(axis).size(); }
  std::span<const double> weights(std::size_t axis) const { return weights_.at(axis); }
  std::size_t cells() const { return cells_; }
  bool uniform() const { return uniform_; }

  /// Row-major flat index, last axis fastest.
  std::size_t flat(std::span<const std::size_t> coords) const;
  void unflatten(std::size_t flat, std::span<std::size_t> coords) const;
  double cell_weight(std::size_t flat) const;

 private:
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> strides_;
  std::size_t cells_ = 1;
  bool uniform_ = true;
};

class ProductSubset {
 public:
  ProductSubset(FiniteProductSpace space, std::vector<std::uint8_t> membership);
  static ProductSubset empty(FiniteProductSpace space);
  static ProductSubset full(FiniteProductSpace space);

  const FiniteProductSpace& space() const { return space_; }
  std::span<const std::uint8_t> membership() const { return members_; }
  bool contains(std::size_t flat) const { return members_[flat] != 0; }

  double measure() const;
  double delta() const { return delta_of(measure()); }
  ProductSubset complement() const;

 private:
  FiniteProductSpace space_;
  std::vector<std::uint8_t> members_;
};

struct Section {
  std::vector<std::uint8_t> members;  // over the factor `axis`
  double measure = 0.0;
  double delta = 0.0;
};

/// {x_axis : (coords with x_axis substituted) in E}. coords has one entry per
/// factor; the entry at `axis` is ignored. Throws std::out_of_range for a bad
/// axis or coordinate.
Section section(const ProductSubset& e, std::size_t axis, std::span<const std::size_t> coords);

/// Max section delta along one axis, and over all axes.
double max_section_delta(const ProductSubset& e, std::size_t axis);
double max_section_delta(const ProductSubset& e);

struct SectionBoundCheck {
  double delta = 0.0;   // delta(E)
  double delta0 = 0.0;  // max section delta
  double bound = 0.0;   // 3^{m-1} delta0
  bool holds = false;
  double slack() const { return bound - delta; }
};

SectionBoundCheck section_bound_check(const ProductSubset& e);

/// E viewed in (X_1 x ... x X_k) x X_{k+1} x ...: the first k factors merged
/// into one with product weights.
ProductSubset flatten_leading(const ProductSubset& e, std::size_t k);

struct InequalityLine {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Numerical trace of the two-factor argument: the partition X_j^< / X_j^>,
/// alpha_j = mu_j(X_j^>), and each step of the chain.
struct TwoFactorTrace {
  double delta0 = 0.0;
  bool trivially_true = false;  // delta0 >= 1/2: nothing to prove
  bool hypothesis_holds = true; // every section delta <= delta0
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::vector<InequalityLine> lines;  // each step of the chain, in order
  bool small_case = false;  // alpha1 <= 2 delta0
  bool large_case = false;  // alpha1 >= 1 - 2 delta0
  double measure = 0.0;
  bool conclusion_holds = false;  // mu(E) <= 3 delta0 or mu(E) >= 1 - 3 delta0
  bool all_hold() const;
};

/// Requires a two-factor space. delta0 defaults to the max section delta.
TwoFactorTrace two_factor_inequality_trace(const ProductSubset& e, std::optional<double> delta0 = std::nullopt);

}  // namespace bhlab
