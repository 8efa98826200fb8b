#ifndef LEVYATM_PRICING_HPP
#define LEVYATM_PRICING_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

#include "levyatm/mathkit.hpp"
#include "levyatm/model.hpp"
#include "levyatm/rng.hpp"
#include "levyatm/stable.hpp"

namespace levyatm {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Black-Scholes call, zero rates.
inline double bs_call(double s0, double k_strike, double sigma, double t) {
  if (sigma <= 0.0 || t <= 0.0) return std::max(s0 - k_strike, 0.0);
  const double sq = sigma * std::sqrt(t);
  const double d1 = std::log(s0 / k_strike) / sq + 0.5 * sq;
  return s0 * norm_cdf(d1) - k_strike * norm_cdf(d1 - sq);
}

/// Unique sigma with bs_call(sigma) = price, safeguarded Newton to 1e-12 in price.
inline double implied_vol(double price, double s0, double k_strike, double t) {
  const double intrinsic = std::max(s0 - k_strike, 0.0);
  if (!(t > 0.0)) throw std::domain_error("implied_vol: t must be positive");
  if (!(price > intrinsic) || !(price < s0))
    throw std::domain_error("implied_vol: price outside no-arbitrage bounds");
  const double tol = 1e-12 * s0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60 && bs_call(s0, k_strike, hi, t) < price; ++i) hi *= 2.0;
  if (bs_call(s0, k_strike, hi, t) < price)
    throw accuracy_error("implied_vol: bracket expansion failed", hi);
  double sigma = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double diff = bs_call(s0, k_strike, sigma, t) - price;
    if (std::abs(diff) <= tol) return sigma;
    if (diff > 0.0)
      hi = sigma;
    else
      lo = sigma;
    const double sq = sigma * std::sqrt(t);
    const double d1 = std::log(s0 / k_strike) / sq + 0.5 * sq;
    const double vega = s0 * std::sqrt(t) * std::exp(-0.5 * d1 * d1) / std::sqrt(2.0 * M_PI);
    double next = vega > 0.0 ? sigma - diff / vega : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    sigma = next;
  }
  throw accuracy_error("implied_vol: no convergence",
                       std::abs(bs_call(s0, k_strike, sigma, t) - price));
}

// ---------------------------------------------------------------------------
// Fourier-inversion (IFT) pricer
// ---------------------------------------------------------------------------

struct IftConfig {
  std::size_t p_points = 1u << 14;  ///< P
  double q_range = 800.0;           ///< Q; integration runs over [-Q/2, Q/2]
  double control_vol = 0.2;         ///< Black-Scholes control volatility Sigma

  void validate() const {
    if (p_points < 4 || p_points % 2 != 0)
      throw std::invalid_argument("IftConfig: p_points must be even and >= 4");
    if (!(q_range > 0.0)) throw std::invalid_argument("IftConfig: q_range must be positive");
    if (!(control_vol > 0.0)) throw std::invalid_argument("IftConfig: control_vol must be positive");
  }
};

struct IftResult {
  double price;
  double error_estimate;
  bool tail_warning;  ///< set when the integrand mass near +-Q/2 suggests truncation error
};

namespace detail {

inline std::complex<double> bs_char(double sigma, double t, std::complex<double> u) {
  return std::exp(-0.5 * sigma * sigma * t * (u * u + std::complex<double>(0.0, 1.0) * u));
}

inline std::complex<double> zeta_integrand(const CgmyParams& p, double t, double control_vol,
                                           double v) {
  const std::complex<double> u(v, -1.0);
  const std::complex<double> iv(0.0, v);
  const std::complex<double> num = char_function(p, t, u) - bs_char(control_vol, t, u);
  return num / (iv * (1.0 + iv));
}

}  // namespace detail

/// ATM call price via the control-variate Fourier inversion on the paper's
/// Simpson grid.  With P even, v = 0 is never a grid node, so the removable
/// singularity of the integrand is never evaluated.
inline IftResult price_ift(const CgmyParams& p, double t, const IftConfig& cfg, double s0 = 1.0) {
  cfg.validate();
  if (!(t > 0.0)) throw std::domain_error("price_ift: t must be positive");
  auto zeta = [&p, t, &cfg](double v) {
    return detail::zeta_integrand(p, t, cfg.control_vol, v);
  };
  auto run = [&zeta, &cfg](std::size_t n) {
    const QuadratureGrid grid = QuadratureGrid::make(-cfg.q_range / 2.0, cfg.q_range / 2.0, n);
    return simpson_integrate(zeta, grid).real() / (2.0 * M_PI);
  };
  const double fine = run(cfg.p_points);
  const double coarse = run(cfg.p_points / 2);
  // tail mass over the outer decade of nodes, as a truncation diagnostic
  const QuadratureGrid grid =
      QuadratureGrid::make(-cfg.q_range / 2.0, cfg.q_range / 2.0, cfg.p_points);
  const double delta = grid.step();
  double tail_mass = 0.0;
  for (std::size_t m = 0; m < grid.n_points; ++m) {
    const double v = grid.lower + static_cast<double>(m) * delta;
    if (std::abs(v) >= 0.45 * cfg.q_range) tail_mass += std::abs(zeta(v)) * delta;
  }
  tail_mass /= 2.0 * M_PI;
  IftResult out;
  out.price = s0 * (bs_call(1.0, 1.0, cfg.control_vol, t) + fine);
  out.error_estimate = s0 * (std::abs(fine - coarse) + tail_mass);
  out.tail_warning = tail_mass > 1e-6;
  return out;
}

// ---------------------------------------------------------------------------
// Share-measure Monte Carlo pricer
// ---------------------------------------------------------------------------

struct McConfig {
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  bool antithetic = false;
  unsigned max_threads = 0;  ///< 0 = LEVY_ATM_THREADS env or hardware count

  void validate() const {
    if (n_paths < 1) throw std::invalid_argument("McConfig: n_paths must be >= 1");
  }
};

struct McResult {
  double price;
  double std_error;
};

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LEVY_ATM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace detail

/// Prices the ATM call under the stable measure: the pure-jump part is
/// simulated as two independent totally-skewed Y-stable variates (the
/// compensated positive/negative jump components), reweighted by the
/// measure-change density.  Paths are partitioned into fixed sub-stream
/// chunks merged in chunk order, so results do not depend on thread count.
inline McResult price_mc(const CgmyParams& p, double t, const McConfig& cfg, double s0 = 1.0) {
  cfg.validate();
  if (!(t > 0.0)) throw std::domain_error("price_mc: t must be positive");
  const MeasureChangeConstants k = measure_constants(p);
  const double scale_pow =
      t * p.C * std::abs(std::cos(0.5 * M_PI * p.Y)) * gamma_real(-p.Y);
  const StableParamsSSF one_sided(p.Y, std::pow(scale_pow, 1.0 / p.Y), 1.0, 0.0);
  const double sqrt_t = std::sqrt(t);
  const double log_weight_const = -k.eta * t;
  const double drift_term = t * k.gamma_tilde;

  constexpr std::size_t kChunks = 64;
  const std::size_t per_chunk = cfg.n_paths / kChunks;
  const std::size_t remainder = cfg.n_paths % kChunks;

  auto run_chunk = [&](std::size_t chunk) {
    RngStream rng = RngStream::substream(cfg.seed, chunk);
    const std::size_t n = per_chunk + (chunk < remainder ? 1 : 0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = sample_stable(one_sided, rng);   // U+_T
      const double b = sample_stable(one_sided, rng);   // -U-_T
      const double weight = std::exp(-k.m_star * a - k.g_star * b + log_weight_const);
      auto payoff = [&](double w) {
        const double x = a - b + drift_term + p.sigma * sqrt_t * w;
        return weight * std::max(-std::expm1(-x), 0.0);
      };
      double value;
      if (p.sigma > 0.0) {
        const double w = rng.normal();
        value = cfg.antithetic ? 0.5 * (payoff(w) + payoff(-w)) : payoff(w);
      } else {
        value = payoff(0.0);
      }
      sum += value;
      sumsq += value * value;
    }
    return std::pair<double, double>(sum, sumsq);
  };

  std::vector<std::pair<double, double>> partial(kChunks);
  const unsigned n_threads = std::min<unsigned>(detail::resolve_threads(cfg.max_threads),
                                                static_cast<unsigned>(kChunks));
  if (n_threads <= 1) {
    for (std::size_t c = 0; c < kChunks; ++c) partial[c] = run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t c = w; c < kChunks; c += n_threads) partial[c] = run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (const auto& [s, s2] : partial) {
    sum += s;
    sumsq += s2;
  }
  const double n = static_cast<double>(cfg.n_paths);
  const double mean = sum / n;
  const double var = std::max(sumsq / n - mean * mean, 0.0);
  return {s0 * mean, s0 * std::sqrt(var / n)};
}

}  // namespace levyatm

#endif  // LEVYATM_PRICING_HPP
