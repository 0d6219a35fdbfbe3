#pragma once

// Fourier analysis on the cyclic group T_N = {2 pi j / N : j = 0..N-1}.
//
// Normalization: the forward transform carries the factor 1/N,
//
//   dft(f)[k] = (1/N) sum_j f(2 pi j/N) e^{-2 pi i jk/N},
//   idft(s)[j] = sum_k s[k] e^{2 pi i jk/N},
//
// so that T_N carries the normalized counting (probability) measure. This is
// NOT the convention of FFTW/numpy, which put no factor on the forward
// transform. Norms ||f||_{A_p(T_N)} are l^p norms of dft(f) under this
// normalization; in particular ||1||_{A(T_N)} = 1 and ||e_k||_{A(T_N)} = 1.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace bhlab {

using cplx = std::complex<double>;

/// Complex-valued function on T_N; value j is f(2 pi j/N).
class CyclicFunction {
 public:
  explicit CyclicFunction(std::vector<cplx> values);

  static CyclicFunction constant(std::size_t order, cplx value);
  /// The character e_k(2 pi j/N) = e^{2 pi i jk/N}, k taken mod N.
  static CyclicFunction character(std::size_t order, std::int64_t k);
  static CyclicFunction from_real(std::span<const double> values);

  std::size_t order() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  cplx operator[](std::size_t j) const { return values_[j]; }

  /// True when every imaginary part is within `tol`.
  bool is_real(double tol) const;
  std::vector<double> real_values() const;

 private:
  std::vector<cplx> values_;
};

/// Fourier coefficients indexed by k in Z_N.
class Spectrum {
 public:
  explicit Spectrum(std::vector<cplx> coeffs);

  std::size_t order() const { return coeffs_.size(); }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](std::size_t k) const { return coeffs_[k]; }

 private:
  std::vector<cplx> coeffs_;
};

Spectrum dft(const CyclicFunction& f);
CyclicFunction idft(const Spectrum& s);

/// l^p norm of a coefficient sequence, p >= 1.
double lp_norm(std::span<const cplx> coeffs, double p);

/// ||f||_{A_p(T_N)} = ||dft(f)||_{l^p}. Throws std::invalid_argument if p < 1.
double a_norm(const CyclicFunction& f, double p = 1.0);

/// ||f||_{L^2(T_N)} under the probability measure (root mean square).
double l2_norm(const CyclicFunction& f);
double sup_norm(const CyclicFunction& f);

/// (f1 * f2)(t) = (1/N) sum_x f1(x) f2(t - x); dft(f1 * f2) = dft(f1) dft(f2).
CyclicFunction convolve(const CyclicFunction& f1, const CyclicFunction& f2);

CyclicFunction multiply(const CyclicFunction& f1, const CyclicFunction& f2);
CyclicFunction subtract(const CyclicFunction& f1, const CyclicFunction& f2);

/// Restricting sum_nu c_nu e^{i nu t} to T_N: coefficient k collects every
/// c_nu with nu = k (mod N). The l^1 norm can only shrink.
Spectrum fold_circle_series(std::span<const std::pair<std::int64_t, cplx>> coeff_pairs,
                            std::size_t order);

/// CSV with header "k,re,im", one row per coefficient.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

namespace detail {
/// Unnormalized transform sum_j x_j e^{sign * 2 pi i jk/N}, sign = -1 or +1.
/// Mixed-radix Cooley-Tukey over the prime factorization of N; prime lengths
/// use the direct quadratic sum.
std::vector<cplx> transform(std::span<const cplx> x, int sign);
}  // namespace detail

}  // namespace bhlab
