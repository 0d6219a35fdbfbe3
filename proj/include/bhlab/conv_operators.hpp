#pragma once

// Translation-invariant operators on l^1(Z) are convolutions U x = u * x with
// a summable kernel u, and ||U||_{l^1 -> l^1} = ||u||_{l^1}. Powers of U are
// convolution powers of u, whose l^1 norms are the A(T)-norms of the powers
// of the symbol sum_k u_k e^{ikt}. Kernels here are finitely supported; what
// truncation dropped is carried along as tail mass.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "bhlab/circle_maps.hpp"
#include "bhlab/config.hpp"
#include "bhlab/cyclic_fourier.hpp"
#include "bhlab/outcome.hpp"

namespace bhlab {

class Kernel {
 public:
  /// Entries are sorted by offset; repeated offsets are summed.
  explicit Kernel(std::vector<std::pair<std::int64_t, cplx>> terms, double tail_mass = 0.0);
  static Kernel delta(std::int64_t offset, cplx weight = 1.0);

  std::span<const std::pair<std::int64_t, cplx>> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double l1() const { return l1_; }
  /// Upper bound on the l^1 mass missing from this truncation.
  double tail_mass() const { return tail_mass_; }
  std::int64_t min_offset() const;
  std::int64_t max_offset() const;
  /// max - min + 1, or 0 for an empty kernel.
  std::uint64_t support_width() const;
  cplx weight_at(std::int64_t offset) const;

 private:
  std::vector<std::pair<std::int64_t, cplx>> terms_;
  double l1_ = 0.0;
  double tail_mass_ = 0.0;
};

/// Fourier coefficients of e^{i phi} on T_M placed at representatives
/// k in (-M/2, M/2]. Weights of modulus <= prune are dropped into the tail
/// mass, so l1 + tail_mass = ||e^{i phi}||_{A(T_M)}. Linear maps give the
/// single weight e^{i offset} at the (folded) winding number.
Kernel kernel_from_map(const CircleMap& map, std::size_t M, double prune = kTol.kernel_prune);

/// (a * b)_k = sum_j a_j b_{k-j}; the support is the full sumset. Tail mass
/// bound t_a l1_b + l1_a t_b + t_a t_b.
Kernel convolve_kernels(const Kernel& a, const Kernel& b);

/// sum_k u_k e^{ikt}
cplx symbol(const Kernel& u, double t);
/// The symbol at 2 pi j / M, j = 0..M-1.
CyclicFunction sample_symbol(const Kernel& u, std::size_t M);

struct PowerEntry {
  std::int64_t n = 0;
  double norm = 1.0;  // l1(u^{*n})
  std::uint64_t support_width = 1;
  double tail_mass = 0.0;
};

/// n = 0..n_max, entry 0 being the identity kernel. Skipped when a power's
/// support would exceed caps.kernel_support.
Outcome<std::vector<PowerEntry>> power_norms(const Kernel& u, std::int64_t n_max, const Caps& caps = {});

/// Header "n,power_norm,support_width,tail_mass".
void write_power_csv(std::ostream& out, std::span<const PowerEntry> entries);

}  // namespace bhlab
