#include "bhlab/cyclic_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace bhlab {

CyclicFunction::CyclicFunction(std::vector<cplx> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("CyclicFunction: order must be >= 1");
}

CyclicFunction CyclicFunction::constant(std::size_t order, cplx value) {
  return CyclicFunction(std::vector<cplx>(order, value));
}

CyclicFunction CyclicFunction::character(std::size_t order, std::int64_t k) {
  if (order == 0) throw std::invalid_argument("CyclicFunction: order must be >= 1");
  const auto n = static_cast<std::int64_t>(order);
  const std::int64_t kk = ((k % n) + n) % n;
  std::vector<cplx> v(order);
  for (std::int64_t j = 0; j < n; ++j) {
    // reduce jk mod N before forming the angle so large k stays exact
    const auto r = static_cast<std::int64_t>((static_cast<__int128>(j) * kk) % n);
    v[static_cast<std::size_t>(j)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  }
  return CyclicFunction(std::move(v));
}

CyclicFunction CyclicFunction::from_real(std::span<const double> values) {
  std::vector<cplx> v(values.begin(), values.end());
  return CyclicFunction(std::move(v));
}

bool CyclicFunction::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](cplx v) { return std::abs(v.imag()) <= tol; });
}

std::vector<double> CyclicFunction::real_values() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](cplx v) { return v.real(); });
  return out;
}

Spectrum::Spectrum(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("Spectrum: order must be >= 1");
}

namespace detail {
namespace {

std::size_t smallest_prime_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return p;
  return n;
}

// Forward roots e^{-2 pi i k/N}, k = 0..N-1, cached per thread.
const std::vector<cplx>& roots(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<std::vector<cplx>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  if (cache.size() > 32) cache.clear();
  auto table = std::make_unique<std::vector<cplx>>(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) (*table)[k] = std::polar(1.0, step * static_cast<double>(k));
  return *cache.emplace(n, std::move(table)).first->second;
}

struct Transformer {
  const std::vector<cplx>& w;  // roots of unity for the full length
  std::size_t full;
  bool inverse;

  cplx root(std::size_t e, std::size_t n) const {
    // W_n^e with W_n = e^{-+2 pi i/n}
    const cplx r = w[(e % n) * (full / n)];
    return inverse ? std::conj(r) : r;
  }

  // out[k] = sum_j in[j*stride] W_n^{jk}; scratch has room for n values.
  void run(const cplx* in, std::size_t stride, cplx* out, std::size_t n, cplx* scratch) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = smallest_prime_factor(n);
    if (p == n) {
      for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        std::size_t e = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += in[j * stride] * root(e, n);
          e += k;
          if (e >= n) e -= n;
        }
        out[k] = acc;
      }
      return;
    }
    const std::size_t m = n / p;
    for (std::size_t r = 0; r < p; ++r) run(in + r * stride, stride * p, scratch + r * m, m, out + r * m);
    if (p == 2) {
      for (std::size_t k = 0; k < m; ++k) {
        const cplx a = scratch[k];
        const cplx b = root(k, n) * scratch[m + k];
        out[k] = a + b;
        out[k + m] = a - b;
      }
      return;
    }
    for (std::size_t q = 0; q < p; ++q) {
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t idx = k + m * q;
        cplx acc = scratch[k];
        for (std::size_t r = 1; r < p; ++r) acc += root(r * idx, n) * scratch[r * m + k];
        out[idx] = acc;
      }
    }
  }
};

}  // namespace

std::vector<cplx> transform(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  if (n == 0) return out;
  std::vector<cplx> scratch(n);
  Transformer t{roots(n), n, sign > 0};
  t.run(x.data(), 1, out.data(), n, scratch.data());
  return out;
}

}  // namespace detail

Spectrum dft(const CyclicFunction& f) {
  auto c = detail::transform(f.values(), -1);
  const double inv = 1.0 / static_cast<double>(f.order());
  for (auto& v : c) v *= inv;
  return Spectrum(std::move(c));
}

CyclicFunction idft(const Spectrum& s) { return CyclicFunction(detail::transform(s.coeffs(), +1)); }

double lp_norm(std::span<const cplx> coeffs, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (p == 1.0) {
    double acc = 0.0;
    for (cplx c : coeffs) acc += std::abs(c);
    return acc;
  }
  if (p == 2.0) {
    double acc = 0.0;
    for (cplx c : coeffs) acc += std::norm(c);
    return std::sqrt(acc);
  }
  // scale by the largest modulus so large p does not underflow
  double peak = 0.0;
  for (cplx c : coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (cplx c : coeffs) acc += std::pow(std::abs(c) / peak, p);
  return peak * std::pow(acc, 1.0 / p);
}

double a_norm(const CyclicFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("a_norm: p must be >= 1");
  return lp_norm(dft(f).coeffs(), p);
}

double l2_norm(const CyclicFunction& f) {
  double acc = 0.0;
  for (cplx v : f.values()) acc += std::norm(v);
  return std::sqrt(acc / static_cast<double>(f.order()));
}

double sup_norm(const CyclicFunction& f) {
  double peak = 0.0;
  for (cplx v : f.values()) peak = std::max(peak, std::abs(v));
  return peak;
}

namespace {
void require_same_order(const CyclicFunction& a, const CyclicFunction& b, const char* what) {
  if (a.order() != b.order())
    throw std::invalid_argument(std::string(what) + ": order mismatch (" + std::to_string(a.order()) +
                                " vs " + std::to_string(b.order()) + ")");
}
}  // namespace

CyclicFunction convolve(const CyclicFunction& f1, const CyclicFunction& f2) {
  require_same_order(f1, f2, "convolve");
  const Spectrum s1 = dft(f1);
  const Spectrum s2 = dft(f2);
  std::vector<cplx> prod(s1.order());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = s1[k] * s2[k];
  return idft(Spectrum(std::move(prod)));
}

CyclicFunction multiply(const CyclicFunction& f1, const CyclicFunction& f2) {
  require_same_order(f1, f2, "multiply");
  std::vector<cplx> v(f1.order());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f1[j] * f2[j];
  return CyclicFunction(std::move(v));
}

CyclicFunction subtract(const CyclicFunction& f1, const CyclicFunction& f2) {
  require_same_order(f1, f2, "subtract");
  std::vector<cplx> v(f1.order());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f1[j] - f2[j];
  return CyclicFunction(std::move(v));
}

Spectrum fold_circle_series(std::span<const std::pair<std::int64_t, cplx>> coeff_pairs,
                            std::size_t order) {
  if (order == 0) throw std::invalid_argument("fold_circle_series: order must be >= 1");
  const auto n = static_cast<std::int64_t>(order);
  std::vector<cplx> c(order, 0.0);
  for (const auto& [nu, value] : coeff_pairs) c[static_cast<std::size_t>(((nu % n) + n) % n)] += value;
  return Spectrum(std::move(c));
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "k,re,im\n";
  for (std::size_t k = 0; k < s.order(); ++k) out << fmt::format("{},{},{}\n", k, s[k].real(), s[k].imag());
}

}  // namespace bhlab
