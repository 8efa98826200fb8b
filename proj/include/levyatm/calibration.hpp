#ifndef LEVYATM_CALIBRATION_HPP
#define LEVYATM_CALIBRATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyatm/mathkit.hpp"

namespace levyatm {

struct MarketQuote {
  std::string date;
  double maturity;
  double log_moneyness;
  double implied_vol;
  double weight = 1.0;

  void validate() const {
    if (!(maturity > 0.0)) throw std::invalid_argument("MarketQuote: maturity must be positive");
    if (!(implied_vol > 0.0))
      throw std::invalid_argument("MarketQuote: implied_vol must be positive");
    if (!(weight >= 0.0)) throw std::invalid_argument("MarketQuote: weight must be >= 0");
  }
};

struct CalibrationBounds {
  double c_lo = 1e-4, c_hi = 10.0;   ///< bounds for each of C+, C-
  double y_lo = 1.05, y_hi = 1.95;  ///< coefficients blow up toward 1 and 2
};

struct CalibrationResult {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double y = 0.0;
  std::vector<std::string> dates;
  std::vector<double> spot_vols;  ///< recovered per-date sigma_0, aligned with dates
  double objective = 0.0;
  bool converged = false;
};

/// Coefficient of the spot-vol correction term in the near-the-money
/// implied-vol approximation.
inline double iv_correction_coeff(double c_plus, double c_minus, double y) {
  return (c_plus + c_minus) * std::pow(2.0, -y) * gamma_real(1.0 - 0.5 * y) / (y * (y - 1.0));
}

/// Smallest positive root sigma_0 of
///   iv_star = sigma_0 + A sigma_0^{1-Y} t^{1-Y/2},
/// found by bisection on the decreasing branch (the map has a single
/// minimum in sigma_0; the smallest root lies left of it).
inline double solve_spot_vol(double iv_star, double t, double c_plus, double c_minus, double y) {
  if (!(iv_star > 0.0)) throw std::domain_error("solve_spot_vol: iv_star must be positive");
  if (!(t > 0.0)) throw std::domain_error("solve_spot_vol: t must be positive");
  const double a = iv_correction_coeff(c_plus, c_minus, y) * std::pow(t, 1.0 - 0.5 * y);
  if (a == 0.0) return iv_star;  // degenerate no-jump stub
  auto f = [iv_star, a, y](double s) { return s + a * std::pow(s, 1.0 - y) - iv_star; };
  const double s_min = std::pow(a * (y - 1.0), 1.0 / y);
  double hi = std::min(s_min, iv_star);
  if (f(hi) > 0.0)
    throw std::domain_error("solve_spot_vol: quote infeasible for these parameters");
  double lo = std::min(1e-300, hi * 0.5);
  // f(lo) -> +inf as lo -> 0
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

namespace detail {

struct DateGroup {
  std::string date;
  std::size_t anchor = 0;  ///< index into quotes: smallest |log_moneyness|
  std::vector<std::size_t> members;
};

inline std::vector<DateGroup> group_by_date(const std::vector<MarketQuote>& quotes) {
  std::map<std::string, DateGroup> groups;
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    auto& g = groups[quotes[i].date];
    if (g.members.empty()) {
      g.date = quotes[i].date;
      g.anchor = i;
    } else if (std::abs(quotes[i].log_moneyness) <
               std::abs(quotes[g.anchor].log_moneyness)) {
      g.anchor = i;
    }
    g.members.push_back(i);
  }
  std::vector<DateGroup> out;
  out.reserve(groups.size());
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return out;
}

/// Weighted squared error of the sigma_0-free model against the quotes,
/// or a large penalty when a date's anchor is infeasible.
inline double calibration_objective(const std::vector<MarketQuote>& quotes,
                                    const std::vector<DateGroup>& groups, double cp, double cm,
                                    double y, std::vector<double>* spot_out = nullptr) {
  double obj = 0.0;
  if (spot_out) spot_out->clear();
  for (const auto& g : groups) {
    const MarketQuote& anchor = quotes[g.anchor];
    double s0;
    try {
      s0 = solve_spot_vol(anchor.implied_vol, anchor.maturity, cp, cm, y);
    } catch (const std::domain_error&) {
      if (spot_out) spot_out->push_back(0.0);
      obj += 1e6;
      continue;
    }
    if (s0 <= 1e-6) {  // pure-jump-like market; do not switch regimes silently
      if (spot_out) spot_out->push_back(s0);
      obj += 1e6;
      continue;
    }
    if (spot_out) spot_out->push_back(s0);
    const double coeff = iv_correction_coeff(cp, cm, y) * std::pow(s0, 1.0 - y);
    for (std::size_t idx : g.members) {
      const MarketQuote& q = quotes[idx];
      const double model = s0 + coeff * std::pow(q.maturity, 1.0 - 0.5 * y);
      const double r = model - q.implied_vol;
      obj += q.weight * r * r;
    }
  }
  return obj;
}

}  // namespace detail

/// Near-the-money filter threshold: |log_moneyness| <= factor * iv * sqrt(t).
struct CalibrationConfig {
  double moneyness_factor = 0.5;
  std::size_t max_iterations = 2000;
};

inline CalibrationResult calibrate(std::vector<MarketQuote> quotes,
                                   const CalibrationBounds& bounds = {},
                                   std::array<double, 3> initial_guess = {0.5, 0.5, 1.5},
                                   const CalibrationConfig& config = {}) {
  for (const auto& q : quotes) q.validate();
  auto groups_pre = detail::group_by_date(quotes);
  // near-the-money filter relative to each date's anchor, anchors always kept
  std::vector<MarketQuote> kept;
  for (const auto& g : groups_pre) {
    const MarketQuote& anchor = quotes[g.anchor];
    for (std::size_t idx : g.members) {
      const MarketQuote& q = quotes[idx];
      if (idx == g.anchor ||
          std::abs(q.log_moneyness) <=
              config.moneyness_factor * anchor.implied_vol * std::sqrt(q.maturity))
        kept.push_back(q);
    }
  }
  quotes = std::move(kept);
  const auto groups = detail::group_by_date(quotes);
  for (const auto& g : groups)
    if (g.members.size() < 2)
      throw std::invalid_argument("calibrate: each date needs at least 2 near-the-money quotes");

  auto project = [&bounds](std::array<double, 3> x) {
    x[0] = std::clamp(x[0], bounds.c_lo, bounds.c_hi);
    x[1] = std::clamp(x[1], bounds.c_lo, bounds.c_hi);
    x[2] = std::clamp(x[2], bounds.y_lo, bounds.y_hi);
    return x;
  };
  auto eval = [&](const std::array<double, 3>& x) {
    return detail::calibration_objective(quotes, groups, x[0], x[1], x[2]);
  };

  // Nelder-Mead with box projection
  std::array<std::array<double, 3>, 4> simplex;
  simplex[0] = project(initial_guess);
  for (int i = 0; i < 3; ++i) {
    auto v = simplex[0];
    v[i] += (v[i] > 1.0 ? -0.2 : 0.2) * std::max(std::abs(v[i]), 0.1);
    simplex[i + 1] = project(v);
  }
  std::array<double, 4> fx;
  for (int i = 0; i < 4; ++i) fx[i] = eval(simplex[i]);

  bool converged = false;
  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    std::array<int, 4> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&fx](int a, int b) { return fx[a] < fx[b]; });
    std::array<std::array<double, 3>, 4> s2;
    std::array<double, 4> f2;
    for (int i = 0; i < 4; ++i) {
      s2[i] = simplex[order[i]];
      f2[i] = fx[order[i]];
    }
    simplex = s2;
    fx = f2;
    double size = 0.0;
    for (int i = 1; i < 4; ++i)
      for (int d = 0; d < 3; ++d) size = std::max(size, std::abs(simplex[i][d] - simplex[0][d]));
    if (size < 1e-9 || fx[3] - fx[0] < 1e-16 * (1.0 + fx[0])) {
      converged = true;
      break;
    }
    std::array<double, 3> centroid = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) centroid[d] += simplex[i][d] / 3.0;
    auto blend = [&](double alpha) {
      std::array<double, 3> x;
      for (int d = 0; d < 3; ++d) x[d] = centroid[d] + alpha * (centroid[d] - simplex[3][d]);
      return project(x);
    };
    const auto reflect = blend(1.0);
    const double fr = eval(reflect);
    if (fr < fx[0]) {
      const auto expand = blend(2.0);
      const double fe = eval(expand);
      if (fe < fr) {
        simplex[3] = expand;
        fx[3] = fe;
      } else {
        simplex[3] = reflect;
        fx[3] = fr;
      }
    } else if (fr < fx[2]) {
      simplex[3] = reflect;
      fx[3] = fr;
    } else {
      const auto contract = blend(fr < fx[3] ? 0.5 : -0.5);
      const double fc = eval(contract);
      if (fc < std::min(fr, fx[3])) {
        simplex[3] = contract;
        fx[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int d = 0; d < 3; ++d)
            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[0][d]);
          simplex[i] = project(simplex[i]);
          fx[i] = eval(simplex[i]);
        }
      }
    }
  }

  std::array<int, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&fx](int a, int b) { return fx[a] < fx[b]; });
  const auto best = simplex[order[0]];

  CalibrationResult result;
  result.c_plus = best[0];
  result.c_minus = best[1];
  result.y = best[2];
  result.objective =
      detail::calibration_objective(quotes, groups, best[0], best[1], best[2], &result.spot_vols);
  for (const auto& g : groups) result.dates.push_back(g.date);
  result.converged = converged;
  return result;
}

// ---------------------------------------------------------------------------
// CSV ingestion: header date,maturity,log_moneyness,implied_vol,weight
// ---------------------------------------------------------------------------

inline std::vector<MarketQuote> read_quotes_csv(std::istream& in) {
  std::vector<MarketQuote> quotes;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("quotes CSV: empty input");
  if (line.rfind("date,maturity,log_moneyness,implied_vol", 0) != 0)
    throw std::runtime_error("quotes CSV: unexpected header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) throw std::runtime_error("quotes CSV: malformed row: " + line);
    MarketQuote q;
    q.date = cells[0];
    q.maturity = std::stod(cells[1]);
    q.log_moneyness = std::stod(cells[2]);
    q.implied_vol = std::stod(cells[3]);
    q.weight = cells.size() > 4 && !cells[4].empty() ? std::stod(cells[4]) : 1.0;
    q.validate();
    quotes.push_back(std::move(q));
  }
  return quotes;
}

inline std::vector<MarketQuote> read_quotes_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open quotes file: " + path);
  return read_quotes_csv(in);
}

}  // namespace levyatm

#endif  // LEVYATM_CALIBRATION_HPP
