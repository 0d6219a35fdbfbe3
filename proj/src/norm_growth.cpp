#include "bhlab/norm_growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace bhlab {

std::uint64_t initial_grid(const CircleMap& map, std::int64_t n, const Caps& caps) {
  const double want = static_cast<double>(caps.resolution) *
                      (1.0 + std::abs(static_cast<double>(n)) * map.lipschitz());
  std::uint64_t m = 1;
  while (static_cast<double>(m) < want) m <<= 1;
  return m;
}

NormEstimate circle_a_norm(const CircleMap& map, std::int64_t n, double tolerance, const Caps& caps) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("circle_a_norm: tolerance must be > 0");
  NormEstimate e;
  e.n = n;
  std::uint64_t m = initial_grid(map, n, caps);
  if (n == 0 || map.is_linear()) {
    // e^{i n lift} is a single character times a unimodular constant.
    e.grid = m;
    e.value = 1.0;
    e.converged = true;
    e.history.emplace_back(m, 1.0);
    return e;
  }
  m = std::min<std::uint64_t>(m, std::max<std::uint64_t>(caps.circle_grid, 1));
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    const double v = a_norm(exp_sample(map, n, m));
    e.history.emplace_back(m, v);
    e.grid = m;
    e.value = v;
    if (!std::isnan(prev)) {
      e.tail_estimate = v - prev;
      if (std::abs(v - prev) < tolerance * std::abs(v)) {
        e.converged = true;
        break;
      }
    }
    if (m > caps.circle_grid / 2) break;
    prev = v;
    m *= 2;
  }
  return e;
}

GrowthSeries growth_table(const CircleMap& map, std::span<const std::int64_t> n_list, double tolerance,
                          const Caps& caps) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] <= 0) throw std::invalid_argument("growth_table: n values must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw std::invalid_argument("growth_table: n values must increase");
  }
  GrowthSeries s;
  s.map = map.spec();
  s.tolerance = tolerance;
  for (auto n : n_list) s.entries.push_back(circle_a_norm(map, n, tolerance, caps));
  return s;
}

std::string_view to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::constant: return "constant";
    case GrowthModel::log: return "log";
    case GrowthModel::power: return "power";
  }
  return "unknown";
}

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_growth: need at least two distinct n");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  return l;
}

}  // namespace

FitResult fit_growth(const GrowthSeries& series, GrowthModel model) {
  std::vector<double> ns, norms;
  for (const auto& e : series.entries)
    if (e.converged) {
      ns.push_back(static_cast<double>(e.n));
      norms.push_back(e.value);
    }
  if (ns.size() < 4)
    throw std::invalid_argument("fit_growth: need at least 4 converged entries, have " + std::to_string(ns.size()));

  FitResult r;
  r.model = model;
  r.points = ns.size();
  std::vector<double> predicted(ns.size());
  std::vector<double> log_n(ns.size()), log_norm(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    log_n[i] = std::log(ns[i]);
    log_norm[i] = std::log(norms[i]);
  }
  switch (model) {
    case GrowthModel::constant: {
      double mean = 0.0;
      for (double v : norms) mean += v;
      mean /= static_cast<double>(norms.size());
      r.coefficient = mean;
      std::fill(predicted.begin(), predicted.end(), mean);
      break;
    }
    case GrowthModel::log: {
      const Line l = least_squares(log_n, norms);
      r.coefficient = l.slope;
      r.intercept = l.intercept;
      for (std::size_t i = 0; i < ns.size(); ++i) predicted[i] = l.slope * log_n[i] + l.intercept;
      break;
    }
    case GrowthModel::power: {
      const Line l = least_squares(log_n, log_norm);
      r.exponent = l.slope;
      r.coefficient = std::exp(l.intercept);
      for (std::size_t i = 0; i < ns.size(); ++i) predicted[i] = r.coefficient * std::pow(ns[i], r.exponent);
      break;
    }
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(predicted[i] > 0.0)) {
      r.residual = std::numeric_limits<double>::infinity();
      return r;
    }
    const double d = log_norm[i] - std::log(predicted[i]);
    ss += d * d;
  }
  r.residual = std::sqrt(ss / static_cast<double>(ns.size()));
  return r;
}

void write_growth_csv(std::ostream& out, const GrowthSeries& series) {
  out << "n,norm,grid,converged\n";
  for (const auto& e : series.entries)
    out << fmt::format("{},{},{},{}\n", e.n, e.value, e.grid, e.converged ? 1 : 0);
}

void write_growth_long(std::ostream& out, const GrowthSeries& series) {
  out << "n,quantity,value\n";
  for (const auto& e : series.entries) {
    out << fmt::format("{},norm,{}\n", e.n, e.value);
    out << fmt::format("{},grid,{}\n", e.n, e.grid);
    out << fmt::format("{},converged,{}\n", e.n, e.converged ? 1 : 0);
    out << fmt::format("{},tail_estimate,{}\n", e.n, e.tail_estimate);
    if (e.n > 1) out << fmt::format("{},norm_over_log_n,{}\n", e.n, e.value / std::log(static_cast<double>(e.n)));
  }
}

}  // namespace bhlab
