#include "bhlab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhlab/config.hpp"

namespace bhlab {

std::int64_t dirichlet_range(std::int64_t D, std::size_t count) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t r = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (r > kMax / D) return kMax;
    r *= D;
  }
  return r;
}

std::int64_t nearest_integer(double x) { return static_cast<std::int64_t>(std::round(x)); }

namespace {

bool meets_bound(double error, std::int64_t D) {
  return error * static_cast<double>(D) <= 1.0 + kTol.dirichlet;
}

}  // namespace

SimultaneousApprox simultaneous_approx(std::span<const double> alphas, std::int64_t D, std::int64_t budget) {
  if (alphas.empty()) throw std::invalid_argument("simultaneous_approx: alphas must be non-empty");
  if (D < 1) throw std::invalid_argument("simultaneous_approx: D must be >= 1");
  if (budget < 1) throw std::invalid_argument("simultaneous_approx: budget must be >= 1");
  for (double a : alphas)
    if (!std::isfinite(a)) throw std::invalid_argument("simultaneous_approx: non-finite alpha");

  const std::int64_t limit = std::min(dirichlet_range(D, alphas.size()), budget);
  std::int64_t best_q = 1;
  double best_error = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= limit; ++q) {
    const auto qd = static_cast<double>(q);
    double err = 0.0;
    for (double a : alphas) {
      const double x = a * qd;
      err = std::max(err, std::abs(x - std::round(x)));
      if (err < best_error || meets_bound(err, D)) continue;
      break;  // cannot beat the best or meet the bound any more
    }
    if (meets_bound(err, D)) {
      SimultaneousApprox out;
      out.Q = q;
      out.max_error = err;
      for (double a : alphas) out.numerators.push_back(nearest_integer(a * qd));
      return out;
    }
    if (err < best_error) {
      best_error = err;
      best_q = q;
    }
  }

  SimultaneousApprox out;
  out.Q = best_q;
  out.budget_exhausted = true;
  const auto qd = static_cast<double>(best_q);
  out.max_error = 0.0;
  for (double a : alphas) {
    out.numerators.push_back(nearest_integer(a * qd));
    out.max_error = std::max(out.max_error, std::abs(a * qd - std::round(a * qd)));
  }
  return out;
}

ApproxCertificate verify_approx(std::span<const double> alphas, std::int64_t D, const SimultaneousApprox& result) {
  ApproxCertificate cert;
  if (result.numerators.size() != alphas.size() || D < 1) return cert;
  const auto qd = static_cast<double>(result.Q);
  for (std::size_t j = 0; j < alphas.size(); ++j)
    cert.recomputed_error =
        std::max(cert.recomputed_error, std::abs(alphas[j] * qd - static_cast<double>(result.numerators[j])));
  cert.error_matches = std::abs(cert.recomputed_error - result.max_error) <= kTol.dirichlet;
  cert.within_bound = meets_bound(cert.recomputed_error, D);
  cert.q_in_range = result.Q >= 1 && result.Q <= dirichlet_range(D, alphas.size());
  return cert;
}

}  // namespace bhlab
