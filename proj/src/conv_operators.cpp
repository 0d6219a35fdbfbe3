#include "bhlab/conv_operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace bhlab {

Kernel::Kernel(std::vector<std::pair<std::int64_t, cplx>> terms, double tail_mass)
    : terms_(std::move(terms)), tail_mass_(tail_mass) {
  if (!(tail_mass_ >= 0.0)) throw std::invalid_argument("Kernel: tail mass must be >= 0");
  std::stable_sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::int64_t, cplx>> merged;
  for (const auto& t : terms_) {
    if (!std::isfinite(t.second.real()) || !std::isfinite(t.second.imag()))
      throw std::invalid_argument("Kernel: weights must be finite");
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(t);
  }
  terms_ = std::move(merged);
  for (const auto& t : terms_) l1_ += std::abs(t.second);
}

Kernel Kernel::delta(std::int64_t offset, cplx weight) { return Kernel({{offset, weight}}); }

std::int64_t Kernel::min_offset() const {
  if (terms_.empty()) throw std::logic_error("Kernel: empty support");
  return terms_.front().first;
}

std::int64_t Kernel::max_offset() const {
  if (terms_.empty()) throw std::logic_error("Kernel: empty support");
  return terms_.back().first;
}

std::uint64_t Kernel::support_width() const {
  if (terms_.empty()) return 0;
  return static_cast<std::uint64_t>(terms_.back().first - terms_.front().first) + 1;
}

cplx Kernel::weight_at(std::int64_t offset) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), offset,
                             [](const auto& t, std::int64_t k) { return t.first < k; });
  return it != terms_.end() && it->first == offset ? it->second : cplx{};
}

namespace {

std::int64_t representative(std::int64_t k, std::int64_t M) {
  // k in [0, M) -> (-M/2, M/2]
  return 2 * k > M ? k - M : k;
}

}  // namespace

Kernel kernel_from_map(const CircleMap& map, std::size_t M, double prune) {
  if (M == 0) throw std::invalid_argument("kernel_from_map: M must be >= 1");
  const auto m = static_cast<std::int64_t>(M);
  if (map.is_linear()) {
    const std::int64_t k = ((map.winding() % m) + m) % m;
    return Kernel::delta(representative(k, m), std::polar(1.0, map.spec().offset));
  }
  const Spectrum s = dft(exp_sample(map, 1, M));
  std::vector<std::pair<std::int64_t, cplx>> terms;
  double tail = 0.0;
  for (std::int64_t k = 0; k < m; ++k) {
    const cplx w = s[static_cast<std::size_t>(k)];
    if (std::abs(w) <= prune) {
      tail += std::abs(w);
      continue;
    }
    terms.emplace_back(representative(k, m), w);
  }
  return Kernel(std::move(terms), tail);
}

Kernel convolve_kernels(const Kernel& a, const Kernel& b) {
  const double tail = a.tail_mass() * b.l1() + a.l1() * b.tail_mass() + a.tail_mass() * b.tail_mass();
  if (a.size() == 0 || b.size() == 0) return Kernel({}, tail);
  const std::int64_t lo = a.min_offset() + b.min_offset();
  const std::uint64_t width = a.support_width() + b.support_width() - 1;
  std::vector<std::pair<std::int64_t, cplx>> out;
  if (width <= 4 * a.size() * b.size() + 1024) {
    std::vector<cplx> acc(width);
    std::vector<std::uint8_t> hit(width, 0);
    for (const auto& [ka, wa] : a.terms())
      for (const auto& [kb, wb] : b.terms()) {
        const auto idx = static_cast<std::size_t>(ka + kb - lo);
        acc[idx] += wa * wb;
        hit[idx] = 1;
      }
    for (std::size_t i = 0; i < width; ++i)
      if (hit[i]) out.emplace_back(lo + static_cast<std::int64_t>(i), acc[i]);
  } else {
    std::map<std::int64_t, cplx> acc;
    for (const auto& [ka, wa] : a.terms())
      for (const auto& [kb, wb] : b.terms()) acc[ka + kb] += wa * wb;
    out.assign(acc.begin(), acc.end());
  }
  return Kernel(std::move(out), tail);
}

cplx symbol(const Kernel& u, double t) {
  cplx s = 0.0;
  for (const auto& [k, w] : u.terms()) s += w * std::polar(1.0, static_cast<double>(k) * t);
  return s;
}

CyclicFunction sample_symbol(const Kernel& u, std::size_t M) {
  if (M == 0) throw std::invalid_argument("sample_symbol: M must be >= 1");
  const auto m = static_cast<std::int64_t>(M);
  std::vector<cplx> v(M);
  for (std::int64_t j = 0; j < m; ++j) {
    cplx s = 0.0;
    for (const auto& [k, w] : u.terms()) {
      // reduce jk mod M in integers before forming the angle
      std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(j) * k) % m);
      if (r < 0) r += m;
      s += w * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m));
    }
    v[static_cast<std::size_t>(j)] = s;
  }
  return CyclicFunction(std::move(v));
}

Outcome<std::vector<PowerEntry>> power_norms(const Kernel& u, std::int64_t n_max, const Caps& caps) {
  if (n_max < 0) throw std::invalid_argument("power_norms: n_max must be >= 0");
  std::vector<PowerEntry> out;
  out.push_back({0, 1.0, 1, 0.0});
  Kernel power = Kernel::delta(0);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::uint64_t width = power.support_width() + u.support_width() - 1;
    if (u.size() > 0 && width > caps.kernel_support)
      return Skipped{fmt::format("support of u^{{*{}}} would be {} > cap {}", n, width, caps.kernel_support)};
    power = convolve_kernels(power, u);
    out.push_back({n, power.l1(), power.support_width(), power.tail_mass()});
  }
  return out;
}

void write_power_csv(std::ostream& out, std::span<const PowerEntry> entries) {
  out << "n,power_norm,support_width,tail_mass\n";
  for (const auto& e : entries) out << fmt::format("{},{},{},{}\n", e.n, e.norm, e.support_width, e.tail_mass);
}

}  // namespace bhlab
