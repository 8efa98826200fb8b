#ifndef LEVYATM_STABLE_HPP
#define LEVYATM_STABLE_HPP

#include <cmath>
#include <stdexcept>

#include "levyatm/mathkit.hpp"
#include "levyatm/rng.hpp"

namespace levyatm {

/// Strictly Y-stable law with Levy density |x|^{-Y-1}(C+ 1_{x>0} + C- 1_{x<0}).
struct StableLaw {
  double y;
  double c_plus;
  double c_minus;

  StableLaw(double y_, double cp, double cm) : y(y_), c_plus(cp), c_minus(cm) {
    if (!(y > 1.0 && y < 2.0)) throw std::invalid_argument("StableLaw: y must lie in (1,2)");
    if (!(c_plus > 0.0 && c_minus > 0.0))
      throw std::invalid_argument("StableLaw: intensities must be positive");
  }
};

/// Sampling parametrization: S_alpha(scale, skew, location) with the
/// convention scale^alpha = (c+ + c-) Gamma(-alpha) |cos(pi alpha / 2)|.
struct StableParamsSSF {
  double alpha;
  double scale;
  double skew;
  double location;

  StableParamsSSF(double a, double s, double b, double mu)
      : alpha(a), scale(s), skew(b), location(mu) {
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw std::invalid_argument("StableParamsSSF: alpha must lie in (0,2]");
    if (!(scale > 0.0)) throw std::invalid_argument("StableParamsSSF: scale must be positive");
    if (!(std::abs(skew) <= 1.0)) throw std::invalid_argument("StableParamsSSF: |skew| <= 1");
  }

  /// Parameters of the time-t marginal of the StableLaw Levy process.
  static StableParamsSSF from_law(const StableLaw& law, double t = 1.0) {
    const double total = law.c_plus + law.c_minus;
    const double scale_pow =
        t * total * gamma_real(-law.y) * std::abs(std::cos(0.5 * M_PI * law.y));
    return StableParamsSSF(law.y, std::pow(scale_pow, 1.0 / law.y),
                           (law.c_plus - law.c_minus) / total, 0.0);
  }
};

/// Mean of the positive part of Z_1.
inline double positive_part_mean(const StableLaw& law) {
  const double y = law.y;
  const double total = law.c_plus + law.c_minus;
  const double theta = (law.c_plus - law.c_minus) / total;
  const double tanhalf = std::tan(0.5 * M_PI * y);
  const double base =
      std::pow(total * gamma_real(-y) * std::abs(std::cos(0.5 * M_PI * y)), 1.0 / y);
  return (1.0 / M_PI) * gamma_real(1.0 - 1.0 / y) * base *
         std::pow(1.0 + theta * theta * tanhalf * tanhalf, 0.5 / y) *
         std::cos(std::atan(theta * tanhalf) / y);
}

/// P(Z_1 >= 0).
inline double positive_prob(const StableLaw& law) {
  const double theta = (law.c_plus - law.c_minus) / (law.c_plus + law.c_minus);
  return 0.5 + std::atan(theta * std::tan(0.5 * M_PI * law.y)) / (M_PI * law.y);
}

/// Leading tail approximation of P(+-Z_1 >= v): (C+- / Y) v^{-Y}.
inline double tail_asymptote(const StableLaw& law, double v, int side) {
  if (!(v > 0.0)) throw std::domain_error("tail_asymptote: v must be positive");
  const double c = side >= 0 ? law.c_plus : law.c_minus;
  return c / law.y * std::pow(v, -law.y);
}

/// One Chambers-Mallows-Stuck variate.  Valid for alpha in (1, 2]; strictly
/// stable with mean equal to `location`.
inline double sample_stable(const StableParamsSSF& p, RngStream& rng) {
  if (!(p.alpha > 1.0))
    throw std::domain_error("sample_stable: alpha must exceed 1");
  const double u = M_PI * (rng.uniform01() - 0.5);  // Uniform(-pi/2, pi/2)
  const double e = rng.exponential();
  if (p.alpha == 2.0) {
    // degenerate Gaussian branch of the same transform
    return p.location + p.scale * 2.0 * std::sqrt(e) * std::sin(u);
  }
  const double tanhalf = std::tan(0.5 * M_PI * p.alpha);
  const double shift_angle = std::atan(p.skew * tanhalf) / p.alpha;
  const double amp = std::pow(1.0 + p.skew * p.skew * tanhalf * tanhalf, 0.5 / p.alpha);
  const double z = amp * std::sin(p.alpha * (u + shift_angle)) /
                   std::pow(std::cos(u), 1.0 / p.alpha) *
                   std::pow(std::cos(u - p.alpha * (u + shift_angle)) / e,
                            (1.0 - p.alpha) / p.alpha);
  return p.location + p.scale * z;
}

}  // namespace levyatm

#endif  // LEVYATM_STABLE_HPP
