#include "bhlab/littlewood_gk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "bhlab/config.hpp"
#include "bhlab/section_measure.hpp"

namespace bhlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t p = 3; p <= n / p; p += 2)
    if (n % p == 0) return false;
  return true;
}

double gk_ratio(const CyclicFunction& f) {
  if (!f.is_real(kTol.real_part)) throw std::invalid_argument("gk_ratio: f must be real");
  const Spectrum s = dft(f);
  if (std::abs(s[0]) > kTol.mean_zero) throw std::invalid_argument("gk_ratio: f must have mean zero");
  const double norm = lp_norm(s.coeffs(), 1.0);
  if (norm == 0.0) throw std::invalid_argument("gk_ratio: f is identically zero");
  double min_mod = std::abs(f[0].real());
  for (double v : f.real_values()) min_mod = std::min(min_mod, std::abs(v));
  return min_mod / norm;
}

CharDelta char_delta_ratio(std::span<const std::uint8_t> members) {
  std::vector<cplx> v(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) v[j] = members[j] ? 1.0 : 0.0;
  const Spectrum s = dft(CyclicFunction(std::move(v)));
  CharDelta r;
  // mu(E) is the zeroth coefficient; counting keeps it exact.
  const auto count = static_cast<std::size_t>(std::count_if(members.begin(), members.end(), [](auto m) { return m != 0; }));
  r.measure = static_cast<double>(count) / static_cast<double>(members.size());
  r.delta = delta_of(r.measure);
  r.a_norm = count == 0 ? 0.0 : lp_norm(s.coeffs(), 1.0);
  r.ratio = r.a_norm > 0.0 ? r.delta / r.a_norm : 0.0;
  return r;
}

std::optional<double> gk_envelope(std::uint64_t N) {
  if (N < 17) return std::nullopt;
  const double l = std::log(static_cast<double>(N));
  return std::cbrt(std::log(l) / l);
}

std::optional<double> alt_envelope(std::uint64_t N) {
  if (N < 17) return std::nullopt;
  return 1.0 / std::log(static_cast<double>(N));
}

std::string_view to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::random_sets: return "random_sets";
    case SearchStrategy::intervals: return "intervals";
    case SearchStrategy::quadratic_residues: return "quadratic_residues";
  }
  return "unknown";
}

SearchStrategy parse_strategy(std::string_view name) {
  for (auto s : {SearchStrategy::random_sets, SearchStrategy::intervals, SearchStrategy::quadratic_residues})
    if (name == to_string(s)) return s;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected random_sets, intervals or quadratic_residues)");
}

std::string witness_hex(std::span<const std::uint8_t> members) {
  const std::size_t digits = std::max<std::size_t>(1, (members.size() + 3) / 4);
  std::string out = "0x";
  bool leading = true;
  for (std::size_t d = digits; d-- > 0;) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t j = 4 * d + b;
      if (j < members.size() && members[j]) nibble |= 1u << b;
    }
    if (leading && nibble == 0 && d > 0) continue;
    leading = false;
    out += "0123456789abcdef"[nibble];
  }
  return out;
}

namespace {

std::vector<std::size_t> elements(std::span<const std::uint8_t> members) {
  std::vector<std::size_t> e;
  for (std::size_t j = 0; j < members.size(); ++j)
    if (members[j]) e.push_back(j);
  return e;
}

class BestSet {
 public:
  void offer(std::vector<std::uint8_t> members) {
    ++seen_;
    const CharDelta c = char_delta_ratio(members);
    if (have_) {
      const double scale = std::max(std::abs(c.ratio), std::abs(best_.ratio));
      const bool tie = std::abs(c.ratio - best_.ratio) <= 1e-12 * scale;
      if (tie) {
        if (!(elements(members) < elements(witness_))) return;
      } else if (c.ratio < best_.ratio) {
        return;
      }
    }
    have_ = true;
    best_ = c;
    witness_ = std::move(members);
  }
  std::size_t seen() const { return seen_; }
  const CharDelta& best() const { return best_; }
  std::vector<std::uint8_t> take_witness() { return std::move(witness_); }

 private:
  bool have_ = false;
  std::size_t seen_ = 0;
  CharDelta best_;
  std::vector<std::uint8_t> witness_;
};

}  // namespace

GKRecord extremal_search(std::uint64_t N, SearchStrategy strategy, std::size_t trials, std::uint64_t seed) {
  if (!is_prime(N)) throw std::invalid_argument("N must be prime (got " + std::to_string(N) + ")");
  const std::size_t n = N;
  BestSet best;
  switch (strategy) {
    case SearchStrategy::intervals:
      for (std::size_t a = 0; a + 1 < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          std::vector<std::uint8_t> m(n, 0);
          std::fill(m.begin() + static_cast<std::ptrdiff_t>(a), m.begin() + static_cast<std::ptrdiff_t>(b), 1);
          best.offer(std::move(m));
        }
      break;
    case SearchStrategy::quadratic_residues: {
      std::vector<std::uint8_t> qr(n, 0);
      for (std::size_t x = 1; x < n; ++x) qr[(x * x) % n] = 1;
      std::vector<std::uint8_t> nr(n, 0);
      for (std::size_t x = 1; x < n; ++x) nr[x] = !qr[x];
      for (const auto& base : {qr, nr}) {
        best.offer(base);
        auto with_zero = base;
        with_zero[0] = 1;
        best.offer(std::move(with_zero));
      }
      for (std::size_t k = 1; k < n; ++k) {
        std::vector<std::uint8_t> m(n, 0);
        for (std::size_t x = 0; x < n; ++x) m[x] = (x * x) % n < k;
        best.offer(std::move(m));
      }
      break;
    }
    case SearchStrategy::random_sets: {
      if (trials == 0) throw std::invalid_argument("random_sets needs trials >= 1");
      std::mt19937_64 rng(seed);
      for (std::size_t t = 0; t < trials; ++t) {
        std::vector<std::uint8_t> m(n, 0);
        std::uint64_t word = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j % 64 == 0) word = rng();
          m[j] = (word >> (j % 64)) & 1u;
        }
        best.offer(std::move(m));
      }
      break;
    }
  }

  GKRecord r;
  r.N = N;
  r.strategy = strategy;
  r.best = best.best();
  r.candidates = best.seen();
  r.witness = best.take_witness();
  if (r.best.delta > 0.0) {
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = (r.witness[j] ? 1.0 : 0.0) - r.best.measure;
    r.min_modulus_ratio = gk_ratio(CyclicFunction::from_real(f));
  }
  r.envelope = gk_envelope(N);
  r.alt_envelope = alt_envelope(N);
  return r;
}

void write_gk_csv(std::ostream& out, std::span<const GKRecord> records) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string("NA"); };
  out << "N,strategy,best_ratio,envelope,alt_envelope,witness\n";
  for (const auto& r : records)
    out << fmt::format("{},{},{},{},{},{}\n", r.N, to_string(r.strategy), r.best.ratio, opt(r.envelope),
                       opt(r.alt_envelope), witness_hex(r.witness));
}

}  // namespace bhlab
