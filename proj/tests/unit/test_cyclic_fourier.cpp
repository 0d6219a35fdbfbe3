#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "bhlab/cyclic_fourier.hpp"
#include "oracles.hpp"

using namespace bhlab;

namespace {

std::vector<cplx> to_vec(std::span<const cplx> s) { return {s.begin(), s.end()}; }

double rel_err(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  return oracle::max_abs_diff(got, want) / std::max(1.0, oracle::max_abs(want));
}

}  // namespace

TEST(Dft, ConstantMapsToDeltaAtZero) {
  const Spectrum s = dft(CyclicFunction::constant(8, 1.0));
  EXPECT_NEAR(std::abs(s[0] - 1.0), 0.0, 1e-15);
  for (std::size_t k = 1; k < 8; ++k) EXPECT_NEAR(std::abs(s[k]), 0.0, 1e-15);
}

TEST(Dft, FirstCharacterOnT4) {
  const CyclicFunction e1({1.0, {0, 1}, -1.0, {0, -1}});
  const Spectrum s = dft(e1);
  EXPECT_NEAR(std::abs(s[1] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[3]), 0.0, 1e-15);
}

TEST(Dft, MatchesQuadraticOracleOnT16) {
  oracle::Gen g(11);
  const auto v = g.complex_vector(16);
  EXPECT_LT(rel_err(to_vec(dft(CyclicFunction(v)).coeffs()), oracle::naive_dft(v)), 1e-10);
}

TEST(Dft, MatchesOracleAcrossOrders) {
  oracle::Gen g(12);
  for (std::size_t n : {1, 2, 3, 5, 6, 7, 12, 17, 30, 49, 60, 64, 97, 100, 127, 210, 243, 256, 360, 512}) {
    const auto v = g.complex_vector(n);
    EXPECT_LT(rel_err(to_vec(dft(CyclicFunction(v)).coeffs()), oracle::naive_dft(v)), 1e-10) << "N=" << n;
    EXPECT_LT(rel_err(to_vec(idft(Spectrum(v)).values()), oracle::naive_idft(v)), 1e-10) << "N=" << n;
  }
}

TEST(Idft, DeltaGivesCharacter) {
  std::vector<cplx> c(6, 0.0);
  c[0] = 1.0;
  const auto one = idft(Spectrum(c));
  for (cplx v : one.values()) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-15);
  std::fill(c.begin(), c.end(), 0.0);
  c[2] = 1.0;
  const auto f = idft(Spectrum(c));
  const auto e2 = CyclicFunction::character(6, 2);
  EXPECT_LT(oracle::max_abs_diff(to_vec(f.values()), to_vec(e2.values())), 1e-14);
}

TEST(Idft, RoundTripOnT16) {
  oracle::Gen g(13);
  const auto s = g.complex_vector(16);
  EXPECT_LT(rel_err(to_vec(dft(idft(Spectrum(s))).coeffs()), s), 1e-10);
}

TEST(Idft, RoundTripUpTo4096) {
  oracle::Gen g(14);
  for (std::size_t n : {1000, 1024, 2048, 3000, 4093, 4096}) {
    const auto v = g.complex_vector(n);
    EXPECT_LT(rel_err(to_vec(idft(dft(CyclicFunction(v))).values()), v), 1e-10) << "N=" << n;
  }
}

TEST(ANorm, CharacterHasUnitNormForEveryP) {
  for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_NEAR(a_norm(CyclicFunction::character(9, 4), p), 1.0, 1e-14);
}

TEST(ANorm, OnePlusFirstCharacter) {
  const CyclicFunction f({2.0, {1, 1}, 0.0, {1, -1}});
  EXPECT_NEAR(a_norm(f, 1), 2.0, 1e-14);
  EXPECT_NEAR(a_norm(f, 2), std::sqrt(2.0), 1e-14);
}

TEST(ANorm, RejectsPBelowOne) {
  EXPECT_THROW(a_norm(CyclicFunction::constant(3, 1.0), 0.5), std::invalid_argument);
}

TEST(ANorm, ParsevalOnT32) {
  oracle::Gen g(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = g.complex_vector(32);
    double ms = 0;
    for (auto c : v) ms += std::norm(c);
    EXPECT_NEAR(a_norm(CyclicFunction(v), 2), std::sqrt(ms / 32), 1e-10);
    EXPECT_NEAR(l2_norm(CyclicFunction(v)), std::sqrt(ms / 32), 1e-12);
  }
}

TEST(ANorm, NonIncreasingInP) {
  oracle::Gen g(16);
  for (int trial = 0; trial < 50; ++trial) {
    const CyclicFunction f(g.complex_vector(static_cast<std::size_t>(g.integer(1, 40))));
    EXPECT_GE(a_norm(f, 1) + 1e-12, a_norm(f, 2));
    EXPECT_GE(a_norm(f, 2) + 1e-12, a_norm(f, 4));
  }
}

TEST(ANorm, Submultiplicative) {
  oracle::Gen g(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 40));
    const CyclicFunction f1(g.complex_vector(n)), f2(g.complex_vector(n));
    EXPECT_LE(a_norm(multiply(f1, f2)), a_norm(f1) * a_norm(f2) + 1e-12);
  }
}

TEST(ANorm, AtMostNTimesSupNorm) {
  oracle::Gen g(18);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 64));
    const CyclicFunction f(g.complex_vector(n));
    EXPECT_LE(a_norm(f), static_cast<double>(n) * sup_norm(f) + 1e-12);
  }
}

TEST(Convolve, CharacterIsIdempotent) {
  const auto e = CyclicFunction::character(10, 3);
  const auto c = convolve(e, e);
  EXPECT_LT(oracle::max_abs_diff(to_vec(c.values()), to_vec(e.values())), 1e-14);
}

TEST(Convolve, DistinctCharactersAreOrthogonal) {
  const auto c = convolve(CyclicFunction::character(10, 3), CyclicFunction::character(10, 4));
  EXPECT_LT(oracle::max_abs(to_vec(c.values())), 1e-14);
}

TEST(Convolve, MatchesDoubleSumOnT16) {
  oracle::Gen g(19);
  const auto a = g.complex_vector(16), b = g.complex_vector(16);
  const auto c = convolve(CyclicFunction(a), CyclicFunction(b));
  EXPECT_LT(rel_err(to_vec(c.values()), oracle::naive_cyclic_convolution(a, b)), 1e-10);
}

TEST(Convolve, OrderMismatchThrows) {
  EXPECT_THROW(convolve(CyclicFunction::constant(3, 1.0), CyclicFunction::constant(4, 1.0)), std::invalid_argument);
}

TEST(Convolve, SpectrumIsProductOfSpectra) {
  oracle::Gen g(20);
  const CyclicFunction a(g.complex_vector(12)), b(g.complex_vector(12));
  const Spectrum sa = dft(a), sb = dft(b), sc = dft(convolve(a, b));
  for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(std::abs(sc[k] - sa[k] * sb[k]), 0.0, 1e-14);
}

TEST(Fold, FrequencyNFoldsToConstant) {
  const std::vector<std::pair<std::int64_t, cplx>> pairs{{5, 1.0}};
  const Spectrum s = fold_circle_series(pairs, 5);
  EXPECT_EQ(s[0], cplx(1.0));
  for (std::size_t k = 1; k < 5; ++k) EXPECT_EQ(s[k], cplx(0.0));
}

TEST(Fold, AlignedPhasesKeepTheNorm) {
  const std::vector<std::pair<std::int64_t, cplx>> pairs{{1, 1.0}, {1 + 7, 1.0}};
  const Spectrum s = fold_circle_series(pairs, 7);
  EXPECT_EQ(s[1], cplx(2.0));
  EXPECT_DOUBLE_EQ(lp_norm(s.coeffs(), 1), 2.0);
}

TEST(Fold, CancellationShrinksTheNorm) {
  const std::vector<std::pair<std::int64_t, cplx>> pairs{{1, 1.0}, {1 + 7, -1.0}};
  const Spectrum s = fold_circle_series(pairs, 7);
  EXPECT_EQ(s[1], cplx(0.0));
  EXPECT_LT(lp_norm(s.coeffs(), 1), 2.0);
}

TEST(Fold, NegativeFrequenciesLandOnTheirResidue) {
  const std::vector<std::pair<std::int64_t, cplx>> pairs{{-1, 1.0}, {-9, 2.0}};
  const Spectrum s = fold_circle_series(pairs, 4);
  EXPECT_EQ(s[3], cplx(3.0));
}

TEST(Fold, ContractsRandomSeries) {
  oracle::Gen g(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::int64_t, cplx>> pairs;
    double total = 0;
    for (int i = 0; i < 30; ++i) {
      const cplx c(g.uniform(-1, 1), g.uniform(-1, 1));
      pairs.emplace_back(g.integer(-100, 100), c);
      total += std::abs(c);
    }
    const auto n = static_cast<std::size_t>(g.integer(1, 20));
    EXPECT_LE(lp_norm(fold_circle_series(pairs, n).coeffs(), 1), total + 1e-12);
  }
}

TEST(Fold, MatchesSamplingTheSeries) {
  // restricting the trigonometric polynomial to T_N and transforming gives
  // the folded coefficients
  const std::vector<std::pair<std::int64_t, cplx>> pairs{{0, 0.5}, {3, {0, 1}}, {-2, 0.25}, {11, -0.75}};
  const std::size_t n = 8;
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [nu, c] : pairs)
      v[j] += c * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(nu) * static_cast<double>(j) / n);
  EXPECT_LT(oracle::max_abs_diff(to_vec(fold_circle_series(pairs, n).coeffs()), oracle::naive_dft(v)), 1e-14);
}

TEST(CyclicFunction, RejectsEmpty) { EXPECT_THROW(CyclicFunction({}), std::invalid_argument); }

TEST(CyclicFunction, CharacterWithHugeFrequencyIsExact) {
  const std::int64_t k = 1'000'000'000'003;
  const auto big = CyclicFunction::character(7, k);
  const auto small = CyclicFunction::character(7, k % 7);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(big[j], small[j]);
}

TEST(Spectrum, CsvHasHeaderAndOneRowPerCoefficient) {
  std::ostringstream out;
  write_spectrum_csv(out, dft(CyclicFunction::constant(3, 1.0)));
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 8), "k,re,im\n");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}
