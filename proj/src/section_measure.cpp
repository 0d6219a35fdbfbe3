#include "bhlab/section_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bhlab/config.hpp"

namespace bhlab {

namespace {
constexpr double kMeasureTol = 1e-12;
}

FiniteProductSpace::FiniteProductSpace(std::vector<std::size_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("FiniteProductSpace: need at least one factor");
  for (std::size_t n : sizes) {
    if (n == 0) throw std::invalid_argument("FiniteProductSpace: factor sizes must be >= 1");
    weights_.emplace_back(n, 1.0 / static_cast<double>(n));
  }
  strides_.assign(weights_.size(), 1);
  for (std::size_t j = weights_.size(); j-- > 0;) {
    strides_[j] = cells_;
    cells_ *= weights_[j].size();
  }
}

FiniteProductSpace::FiniteProductSpace(std::vector<std::vector<double>> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("FiniteProductSpace: need at least one factor");
  for (const auto& w : weights_) {
    if (w.empty()) throw std::invalid_argument("FiniteProductSpace: factor sizes must be >= 1");
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw std::invalid_argument("FiniteProductSpace: weights must be >= 0");
      total += x;
    }
    if (std::abs(total - 1.0) > kTol.probability)
      throw std::invalid_argument("FiniteProductSpace: weights must sum to 1");
    for (double x : w)
      if (x != w.front()) uniform_ = false;
  }
  strides_.assign(weights_.size(), 1);
  for (std::size_t j = weights_.size(); j-- > 0;) {
    strides_[j] = cells_;
    cells_ *= weights_[j].size();
  }
}

std::size_t FiniteProductSpace::flat(std::span<const std::size_t> coords) const {
  if (coords.size() != weights_.size()) throw std::out_of_range("FiniteProductSpace: wrong coordinate count");
  std::size_t f = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] >= weights_[j].size()) throw std::out_of_range("FiniteProductSpace: coordinate out of range");
    f += coords[j] * strides_[j];
  }
  return f;
}

void FiniteProductSpace::unflatten(std::size_t flat, std::span<std::size_t> coords) const {
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    coords[j] = flat / strides_[j];
    flat %= strides_[j];
  }
}

double FiniteProductSpace::cell_weight(std::size_t flat) const {
  double w = 1.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    w *= weights_[j][flat / strides_[j]];
    flat %= strides_[j];
  }
  return w;
}

ProductSubset::ProductSubset(FiniteProductSpace space, std::vector<std::uint8_t> membership)
    : space_(std::move(space)), members_(std::move(membership)) {
  if (members_.size() != space_.cells())
    throw std::invalid_argument("ProductSubset: membership size does not match the space");
}

ProductSubset ProductSubset::empty(FiniteProductSpace space) {
  const auto n = space.cells();
  return ProductSubset(std::move(space), std::vector<std::uint8_t>(n, 0));
}

ProductSubset ProductSubset::full(FiniteProductSpace space) {
  const auto n = space.cells();
  return ProductSubset(std::move(space), std::vector<std::uint8_t>(n, 1));
}

double ProductSubset::measure() const {
  if (space_.uniform()) {
    const auto count = static_cast<std::size_t>(std::count_if(members_.begin(), members_.end(), [](auto m) { return m != 0; }));
    return static_cast<double>(count) / static_cast<double>(members_.size());
  }
  double total = 0.0;
  for (std::size_t f = 0; f < members_.size(); ++f)
    if (members_[f]) total += space_.cell_weight(f);
  return total;
}

ProductSubset ProductSubset::complement() const {
  std::vector<std::uint8_t> c(members_.size());
  std::transform(members_.begin(), members_.end(), c.begin(), [](auto m) -> std::uint8_t { return m ? 0 : 1; });
  return ProductSubset(space_, std::move(c));
}

Section section(const ProductSubset& e, std::size_t axis, std::span<const std::size_t> coords) {
  const auto& space = e.space();
  if (axis >= space.factors()) throw std::out_of_range("section: axis out of range");
  if (coords.size() != space.factors()) throw std::out_of_range("section: wrong coordinate count");
  std::vector<std::size_t> c(coords.begin(), coords.end());
  Section s;
  s.members.assign(space.size(axis), 0);
  const auto w = space.weights(axis);
  for (std::size_t x = 0; x < space.size(axis); ++x) {
    c[axis] = x;
    if (e.contains(space.flat(c))) {
      s.members[x] = 1;
      s.measure += w[x];
    }
  }
  s.delta = delta_of(s.measure);
  return s;
}

namespace {

// Measure of every section along `axis`, keyed by the flat index with the
// axis coordinate zeroed.
std::vector<double> section_measures(const ProductSubset& e, std::size_t axis) {
  const auto& space = e.space();
  std::vector<double> acc(space.cells(), 0.0);
  std::vector<std::uint8_t> seen(space.cells(), 0);
  std::vector<std::size_t> c(space.factors());
  const auto w = space.weights(axis);
  for (std::size_t f = 0; f < space.cells(); ++f) {
    space.unflatten(f, c);
    const std::size_t x = c[axis];
    c[axis] = 0;
    const std::size_t key = space.flat(c);
    seen[key] = 1;
    if (e.contains(f)) acc[key] += w[x];
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < acc.size(); ++k)
    if (seen[k]) out.push_back(acc[k]);
  return out;
}

}  // namespace

double max_section_delta(const ProductSubset& e, std::size_t axis) {
  if (axis >= e.space().factors()) throw std::out_of_range("max_section_delta: axis out of range");
  double worst = 0.0;
  for (double m : section_measures(e, axis)) worst = std::max(worst, delta_of(m));
  return worst;
}

double max_section_delta(const ProductSubset& e) {
  double worst = 0.0;
  for (std::size_t j = 0; j < e.space().factors(); ++j) worst = std::max(worst, max_section_delta(e, j));
  return worst;
}

SectionBoundCheck section_bound_check(const ProductSubset& e) {
  SectionBoundCheck r;
  r.delta = e.delta();
  r.delta0 = max_section_delta(e);
  r.bound = std::pow(3.0, static_cast<double>(e.space().factors() - 1)) * r.delta0;
  r.holds = r.delta <= r.bound + kMeasureTol;
  return r;
}

ProductSubset flatten_leading(const ProductSubset& e, std::size_t k) {
  const auto& space = e.space();
  if (k == 0 || k > space.factors()) throw std::invalid_argument("flatten_leading: k out of range");
  std::vector<double> merged{1.0};
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> next;
    next.reserve(merged.size() * space.size(j));
    for (double a : merged)
      for (double b : space.weights(j)) next.push_back(a * b);
    merged = std::move(next);
  }
  std::vector<std::vector<double>> weights{std::move(merged)};
  for (std::size_t j = k; j < space.factors(); ++j)
    weights.emplace_back(space.weights(j).begin(), space.weights(j).end());
  // Row-major order is unchanged by merging leading axes.
  if (space.uniform()) {
    std::vector<std::size_t> sizes;
    for (const auto& w : weights) sizes.push_back(w.size());
    return ProductSubset(FiniteProductSpace(std::move(sizes)), {e.membership().begin(), e.membership().end()});
  }
  // Products of weights may miss 1 by a few ulps; renormalize.
  double total = std::accumulate(weights[0].begin(), weights[0].end(), 0.0);
  for (auto& x : weights[0]) x /= total;
  return ProductSubset(FiniteProductSpace(std::move(weights)), {e.membership().begin(), e.membership().end()});
}

bool TwoFactorTrace::all_hold() const {
  if (trivially_true) return true;
  if (!hypothesis_holds || !conclusion_holds || !(small_case || large_case)) return false;
  return std::all_of(lines.begin(), lines.end(), [](const InequalityLine& l) { return l.holds; });
}

TwoFactorTrace two_factor_inequality_trace(const ProductSubset& e, std::optional<double> delta0) {
  const auto& space = e.space();
  if (space.factors() != 2) throw std::invalid_argument("two_factor_inequality_trace: need exactly two factors");
  TwoFactorTrace t;
  const double max_delta = max_section_delta(e);
  t.delta0 = delta0.value_or(max_delta);
  t.measure = e.measure();
  t.hypothesis_holds = max_delta <= t.delta0 + kMeasureTol;
  if (t.delta0 >= 0.5) {
    t.trivially_true = true;
    t.conclusion_holds = true;
    return t;
  }
  const double d = t.delta0;
  const std::size_t n1 = space.size(0);
  const std::size_t n2 = space.size(1);
  const auto w1 = space.weights(0);
  const auto w2 = space.weights(1);

  // mu_2(E^{x1}) and mu_1(E^{x2})
  std::vector<double> row(n1, 0.0), col(n2, 0.0);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      if (e.contains(a * n2 + b)) {
        row[a] += w2[b];
        col[b] += w1[a];
      }
  // With delta0 < 1/2 every section lies in exactly one of [0, d] or [1-d, 1],
  // so the side of 1/2 decides the class without float comparisons to d.
  std::vector<std::uint8_t> big1(n1), big2(n2);
  for (std::size_t a = 0; a < n1; ++a) {
    big1[a] = row[a] > 0.5;
    if (big1[a]) t.alpha1 += w1[a];
  }
  for (std::size_t b = 0; b < n2; ++b) {
    big2[b] = col[b] > 0.5;
    if (big2[b]) t.alpha2 += w2[b];
  }

  double big_small = 0.0, all_small = 0.0, big_big = 0.0;
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b) {
      if (!e.contains(a * n2 + b)) continue;
      const double w = w1[a] * w2[b];
      if (!big2[b]) {
        all_small += w;
        if (big1[a]) big_small += w;
      } else if (big1[a]) {
        big_big += w;
      }
    }
  const double a1 = t.alpha1, a2 = t.alpha2;
  const double big_rows = big_small + big_big;
  auto line = [&](std::string name, double lhs, double rhs) {
    t.lines.push_back({std::move(name), lhs, rhs, lhs <= rhs + kMeasureTol});
  };
  line("big_rows_small_cols <= small_cols", big_small, all_small);
  line("small_cols <= d(1-a2)", all_small, d * (1.0 - a2));
  line("big_rows_big_cols <= a1 a2", big_big, a1 * a2);
  line("big_rows <= d(1-a2) + a1 a2", big_rows, d * (1.0 - a2) + a1 * a2);
  line("(1-d) a1 <= big_rows", (1.0 - d) * a1, big_rows);
  line("(1-d) a1 <= d(1-a2) + a1 a2", (1.0 - d) * a1, d * (1.0 - a2) + a1 * a2);
  line("(1-d) a2 <= d(1-a1) + a1 a2", (1.0 - d) * a2, d * (1.0 - a1) + a1 * a2);

  t.small_case = a1 <= 2.0 * d + kMeasureTol;
  t.large_case = a1 >= 1.0 - 2.0 * d - kMeasureTol;
  t.conclusion_holds = t.measure <= 3.0 * d + kMeasureTol || t.measure >= 1.0 - 3.0 * d - kMeasureTol;
  return t;
}

}  // namespace bhlab
