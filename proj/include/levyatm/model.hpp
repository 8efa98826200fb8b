#ifndef LEVYATM_MODEL_HPP
#define LEVYATM_MODEL_HPP

#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "levyatm/mathkit.hpp"

namespace levyatm {

// ---------------------------------------------------------------------------
// CGMY-with-diffusion parameter vector
// ---------------------------------------------------------------------------

struct CgmyParams {
  double C;      ///< jump intensity (per unit time)
  double G;      ///< left tempering rate
  double M;      ///< right tempering rate (> 1 for the martingale condition)
  double Y;      ///< activity index, in (1, 2)
  double sigma;  ///< diffusion volatility (per sqrt-time); 0 = pure jump

  CgmyParams(double c, double g, double m, double y, double sig)
      : C(c), G(g), M(m), Y(y), sigma(sig) {
    if (!(C > 0.0)) throw std::invalid_argument("CgmyParams: C must be positive");
    validate_rest();
  }

  /// Test-only constructor: admits C = 0 so degenerate limits can be probed.
  static CgmyParams unchecked(double c, double g, double m, double y, double sig) {
    CgmyParams p;
    p.C = c;
    p.G = g;
    p.M = m;
    p.Y = y;
    p.sigma = sig;
    p.validate_rest();
    return p;
  }

  bool pure_jump() const { return sigma == 0.0; }

 private:
  CgmyParams() = default;
  void validate_rest() const {
    if (!(G > 0.0)) throw std::invalid_argument("CgmyParams: G must be positive");
    if (!(M > 1.0)) throw std::invalid_argument("CgmyParams: M must exceed 1");
    if (!(Y > 1.0 && Y < 2.0)) throw std::invalid_argument("CgmyParams: Y must lie in (1,2)");
    if (!(sigma >= 0.0)) throw std::invalid_argument("CgmyParams: sigma must be non-negative");
  }
};

// ---------------------------------------------------------------------------
// General tempered-stable-like model
// ---------------------------------------------------------------------------

struct TemperedStableSpec {
  double c_plus;
  double c_minus;
  double big_m;  ///< right slope, beta_+ / C_+
  double big_g;  ///< left slope, beta_- / C_-
  double y;
  double sigma;
  std::function<double(double)> qbar;  ///< normalized tempering function

  TemperedStableSpec(double cp, double cm, double m, double g, double y_, double sig,
                     std::function<double(double)> q)
      : c_plus(cp), c_minus(cm), big_m(m), big_g(g), y(y_), sigma(sig), qbar(std::move(q)) {
    if (!(c_plus > 0.0 && c_minus > 0.0))
      throw std::invalid_argument("TemperedStableSpec: intensities must be positive");
    if (!(y > 1.0 && y < 2.0)) throw std::invalid_argument("TemperedStableSpec: y must lie in (1,2)");
    if (!(big_m > 1.0)) throw std::invalid_argument("TemperedStableSpec: big_m must exceed 1");
    if (!(big_g > 0.0)) throw std::invalid_argument("TemperedStableSpec: big_g must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("TemperedStableSpec: sigma must be non-negative");
    check_qbar();
  }

  static TemperedStableSpec from_cgmy(const CgmyParams& p) {
    const double m = p.M, g = p.G;
    return TemperedStableSpec(p.C, p.C, m, g, p.Y, p.sigma, [m, g](double x) {
      return x > 0.0 ? std::exp(-m * x) : std::exp(g * x);
    });
  }

 private:
  void check_qbar() const {
    // bound checks at sample points, then a finite-difference slope probe
    static constexpr double kSamples[] = {1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0};
    for (double x : kSamples) {
      if (qbar(x) > std::exp(-x) * (1.0 + 1e-9))
        throw std::invalid_argument("TemperedStableSpec: qbar(x) must not exceed e^{-x} for x > 0");
      if (qbar(-x) > 1.0 + 1e-12)
        throw std::invalid_argument("TemperedStableSpec: qbar(x) must not exceed 1 for x < 0");
    }
    const double h = 1e-6;
    const double slope_r = (1.0 - qbar(h)) / h;
    const double slope_l = (1.0 - qbar(-h)) / (-h);
    if (std::abs(slope_r - big_m) > 1e-3 * (1.0 + std::abs(big_m)))
      throw std::invalid_argument("TemperedStableSpec: qbar right slope at 0 disagrees with big_m");
    if (std::abs(slope_l + big_g) > 1e-3 * (1.0 + std::abs(big_g)))
      throw std::invalid_argument("TemperedStableSpec: qbar left slope at 0 disagrees with big_g");
  }
};

// ---------------------------------------------------------------------------
// Measure-change constants (share measure and the stable measure)
// ---------------------------------------------------------------------------

struct MeasureChangeConstants {
  double m_star;       ///< M - 1
  double g_star;       ///< G + 1
  double eta;          ///< compensator constant of the density process
  double gamma_tilde;  ///< mean of X_1 under the stable measure
  double drift_c;      ///< characteristic-function drift c
  double drift_b;      ///< triplet drift b (truncation 1_{|x|<=1})
};

/// Risk-neutral drift c of the CGMY log return (zero rates, zero dividends).
inline double martingale_drift(const CgmyParams& p) {
  const double gy = gamma_real(-p.Y);
  return -p.C * gy *
             (std::pow(p.M - 1.0, p.Y) + std::pow(p.G + 1.0, p.Y) - std::pow(p.M, p.Y) -
              std::pow(p.G, p.Y)) -
         0.5 * p.sigma * p.sigma;
}

/// Characteristic function E exp(iuX_t) evaluated on the analytic strip.
inline std::complex<double> char_function(const CgmyParams& p, double t,
                                          std::complex<double> u) {
  // (M - iu) and (G + iu) must stay off the negative real axis
  const std::complex<double> iu(-u.imag(), u.real());
  const std::complex<double> zm = std::complex<double>(p.M, 0.0) - iu;
  const std::complex<double> zg = std::complex<double>(p.G, 0.0) + iu;
  if (zm.real() <= 0.0 || zg.real() <= 0.0)
    throw std::domain_error("char_function: argument crosses the branch cut");
  const double c = martingale_drift(p);
  const double gy = gamma_real(-p.Y);
  const std::complex<double> jump =
      p.C * gy *
      (complex_pow(zm, p.Y) + complex_pow(zg, p.Y) - std::pow(p.M, p.Y) - std::pow(p.G, p.Y));
  const std::complex<double> exponent =
      t * (iu * c - 0.5 * p.sigma * p.sigma * u * u + jump);
  return std::exp(exponent);
}

/// CGMY Levy density at x != 0.
inline double levy_density(const CgmyParams& p, double x) {
  if (x == 0.0) throw std::domain_error("levy_density: x must be nonzero");
  const double ax = std::abs(x);
  const double temper = x > 0.0 ? std::exp(-p.M * x) : std::exp(p.G * x);
  return p.C * temper * std::pow(ax, -1.0 - p.Y);
}

inline MeasureChangeConstants measure_constants(const CgmyParams& p) {
  MeasureChangeConstants k;
  k.m_star = p.M - 1.0;
  k.g_star = p.G + 1.0;
  const double gy = gamma_real(-p.Y);
  const double bracket = std::pow(p.M - 1.0, p.Y) + std::pow(p.G + 1.0, p.Y) -
                         std::pow(p.M, p.Y) - std::pow(p.G, p.Y);
  k.eta = p.C * gy * (std::pow(k.m_star, p.Y) + std::pow(k.g_star, p.Y));
  k.gamma_tilde = -p.C * gy * bracket + 0.5 * p.sigma * p.sigma;
  k.drift_c = -p.C * gy * bracket - 0.5 * p.sigma * p.sigma;
  // b = c - int_{|x|>1} x nu(dx) - C Y Gamma(-Y) (M^{Y-1} - G^{Y-1})
  double tail = 0.0;
  if (p.C > 0.0) {
    const double C = p.C, M = p.M, G = p.G, Y = p.Y;
    tail = adaptive_quad([C, M, Y](double x) { return C * std::exp(-M * x) * std::pow(x, -Y); },
                         1.0, std::numeric_limits<double>::infinity(), 1e-12) -
           adaptive_quad([C, G, Y](double x) { return C * std::exp(-G * x) * std::pow(x, -Y); },
                         1.0, std::numeric_limits<double>::infinity(), 1e-12);
  }
  k.drift_b = k.drift_c - tail -
              p.C * p.Y * gy * (std::pow(p.M, p.Y - 1.0) - std::pow(p.G, p.Y - 1.0));
  return k;
}

namespace detail {

/// e^x qbar(x) without the inf * 0 pitfall at large x (the product is bounded
/// by 1 whenever qbar respects its e^{-Mx} envelope, but the naive evaluation
/// overflows first).
inline double exp_times_qbar(const std::function<double(double)>& q, double x) {
  const double qv = q(x);
  return qv > 0.0 ? std::exp(x + std::log(qv)) : 0.0;
}

/// e^x - 1 - x without cancellation at small |x|.
inline double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-3)
    return 0.5 * x * x *
           (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0 * (1.0 + x / 6.0))));
  return std::expm1(x) - x;
}

/// int_0^1 (e^{sx} - 1 - sx) qbar(sx) x^{-1-Y} dx with s = +-1; the integrand
/// is O(x^{1-Y}) and free of cancellation thanks to the series helper.
inline double inner_em1_integral(const std::function<double(double)>& q, double y, double sign,
                                 double abs_tol) {
  return adaptive_quad(
      [&q, y, sign](double x) {
        return expm1_minus_x(sign * x) * q(sign * x) * std::pow(x, -1.0 - y);
      },
      0.0, 1.0, abs_tol, /*singular_endpoints=*/true);
}

/// int_0^1 (qbar(sx) - 1) x^{-Y} dx with s = +-1.  Near 0 the factor
/// qbar - 1 = -slope x + O(x^2) cannot be resolved from a black-box qbar in
/// floating point, so the first stretch uses that expansion analytically.
inline double inner_qbar_defect_integral(const std::function<double(double)>& q, double y,
                                         double sign, double slope, double abs_tol) {
  const double x0 = 1e-8;
  const double patch = -slope * std::pow(x0, 2.0 - y) / (2.0 - y);
  const double rest = adaptive_quad(
      [&q, y, sign](double x) { return (q(sign * x) - 1.0) * std::pow(x, -y); }, x0, 1.0,
      abs_tol, /*singular_endpoints=*/true);
  return patch + rest;
}

}  // namespace detail

/// Triplet drift b of the general model from the martingale condition,
/// b = -sigma^2/2 - int (e^x - 1 - x 1_{|x|<=1}) s(x) dx.
inline double general_drift_b(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  const auto& q = spec.qbar;
  const double Y = spec.y;
  const double cp = spec.c_plus, cm = spec.c_minus;
  const double inf = std::numeric_limits<double>::infinity();
  // positive side, (0,1]: integrand ~ x^{1-Y}/2 near 0
  const double pos_in = cp * detail::inner_em1_integral(q, Y, +1.0, abs_tol / 4.0);
  // beyond the truncation radius the x compensation drops out
  const double pos_out = adaptive_quad(
      [&q, cp, Y](double x) {
        return cp * (detail::exp_times_qbar(q, x) - q(x)) * std::pow(x, -1.0 - Y);
      },
      1.0, inf, abs_tol / 4.0);
  // negative side via x = -u
  const double neg_in = cm * detail::inner_em1_integral(q, Y, -1.0, abs_tol / 4.0);
  const double neg_out = adaptive_quad(
      [&q, cm, Y](double u) {
        return cm * q(-u) * std::expm1(-u) * std::pow(u, -1.0 - Y);
      },
      1.0, inf, abs_tol / 4.0);
  return -0.5 * spec.sigma * spec.sigma - (pos_in + pos_out + neg_in + neg_out);
}

// ---------------------------------------------------------------------------
// key=value model configuration (keys: C, G, M, Y, sigma)
// ---------------------------------------------------------------------------

inline std::map<std::string, double> parse_key_value_stream(std::istream& in) {
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) continue;
    kv[key] = std::stod(val);
  }
  return kv;
}

inline CgmyParams params_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  auto kv = parse_key_value_stream(in);
  for (const char* key : {"C", "G", "M", "Y"})
    if (!kv.count(key)) throw std::runtime_error(std::string("config missing key ") + key);
  return CgmyParams(kv["C"], kv["G"], kv["M"], kv["Y"], kv.count("sigma") ? kv["sigma"] : 0.0);
}

}  // namespace levyatm

#endif  // LEVYATM_MODEL_HPP
