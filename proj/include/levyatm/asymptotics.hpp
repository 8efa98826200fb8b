#ifndef LEVYATM_ASYMPTOTICS_HPP
#define LEVYATM_ASYMPTOTICS_HPP

#include <cmath>
#include <stdexcept>

#include "levyatm/mathkit.hpp"
#include "levyatm/model.hpp"
#include "levyatm/stable.hpp"

namespace levyatm {

enum class Regime { pure_jump, mixed };

/// ATM price expansion s0 (d1 t^{exp1} + d2 t^{exp2}).
struct PriceExpansion {
  double d1;
  double exp1;
  double d2;
  double exp2;
  Regime regime;
};

/// ATM implied-vol expansion s1 t^{exp1} + s2 t^{exp2}.
struct IvExpansion {
  double s1;
  double exp1;
  double s2;
  double exp2;
  Regime regime;
};

/// vartheta-tilde = C+ int_0^inf (e^x qbar - qbar - x) x^{-Y-1} dx.
inline double vartheta_tilde_numeric(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  const auto& q = spec.qbar;
  const double Y = spec.y, cp = spec.c_plus;
  const double inf = std::numeric_limits<double>::infinity();
  // inner split: e^x qbar - qbar - x = qbar (e^x - 1 - x) + (qbar - 1) x
  const double inner = detail::inner_em1_integral(q, Y, +1.0, abs_tol / 3.0) +
                       detail::inner_qbar_defect_integral(q, Y, +1.0, spec.big_m, abs_tol / 3.0);
  // split off the slowly decaying -x^{-Y} tail: int_1^inf x^{-Y} dx = 1/(Y-1);
  // the remainder (e^x - 1) qbar decays exponentially
  const double outer = adaptive_quad(
                           [&q, Y](double x) {
                             return (detail::exp_times_qbar(q, x) - q(x)) * std::pow(x, -1.0 - Y);
                           },
                           1.0, inf, abs_tol / 3.0) -
                       1.0 / (Y - 1.0);
  return cp * (inner + outer);
}

/// gamma-tilde = b + (C+ - C-)/(Y-1) + C+ I+[0,1] - C- I-[-1,0].
inline double gamma_tilde_numeric(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  const auto& q = spec.qbar;
  const double Y = spec.y;
  const double b = general_drift_b(spec, abs_tol);
  // (1 - qbar(x)) = O(x) near 0, so both integrands are O(x^{1-Y})
  const double pos =
      -detail::inner_qbar_defect_integral(q, Y, +1.0, spec.big_m, abs_tol / 2.0);
  const double neg =
      -detail::inner_qbar_defect_integral(q, Y, -1.0, spec.big_g, abs_tol / 2.0);
  return b + (spec.c_plus - spec.c_minus) / (Y - 1.0) + spec.c_plus * pos - spec.c_minus * neg;
}

/// Combined-integral route to the second-order pure-jump coefficient:
/// C+ P(Z<0) I+ - C- P(Z>=0) I- with I+- the signed tempering integrals.
inline double pure_jump_d2_combined(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  const auto& q = spec.qbar;
  const double Y = spec.y;
  const double inf = std::numeric_limits<double>::infinity();
  const double ipos =
      detail::inner_em1_integral(q, Y, +1.0, abs_tol / 4.0) +
      detail::inner_qbar_defect_integral(q, Y, +1.0, spec.big_m, abs_tol / 4.0) +
      adaptive_quad(
          [&q, Y](double x) {
            return (detail::exp_times_qbar(q, x) - q(x)) * std::pow(x, -1.0 - Y);
          },
          1.0, inf, abs_tol / 4.0) -
      1.0 / (Y - 1.0);
  // negative side via x = -u: e^{-u} qbar - qbar + u = qbar em1mx(-u) + (1 - qbar) u
  const double ineg =
      detail::inner_em1_integral(q, Y, -1.0, abs_tol / 4.0) -
      detail::inner_qbar_defect_integral(q, Y, -1.0, spec.big_g, abs_tol / 4.0) +
      adaptive_quad(
          [&q, Y](double u) { return std::expm1(-u) * q(-u) * std::pow(u, -1.0 - Y); }, 1.0, inf,
          abs_tol / 4.0) +
      1.0 / (Y - 1.0);
  const StableLaw law(Y, spec.c_plus, spec.c_minus);
  const double p = positive_prob(law);
  return spec.c_plus * (1.0 - p) * ipos - spec.c_minus * p * ineg;
}

/// Pure-jump CGMY second-order coefficient in closed form.
inline double cgmy_pure_jump_d2(const CgmyParams& p) {
  const double gy = gamma_real(-p.Y);
  return 0.5 * p.C * gy *
         (std::pow(p.M - 1.0, p.Y) - std::pow(p.M, p.Y) - std::pow(p.G + 1.0, p.Y) +
          std::pow(p.G, p.Y));
}

/// Pure-jump expansion, CGMY closed form.
inline PriceExpansion pure_jump_coeffs(const CgmyParams& p) {
  if (!p.pure_jump()) throw std::domain_error("pure_jump_coeffs: sigma must be 0");
  const StableLaw law(p.Y, p.C, p.C);
  return {positive_part_mean(law), 1.0 / p.Y, cgmy_pure_jump_d2(p), 1.0, Regime::pure_jump};
}

/// Pure-jump expansion, general numeric-integral route.
inline PriceExpansion pure_jump_coeffs(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  if (spec.sigma != 0.0) throw std::domain_error("pure_jump_coeffs: sigma must be 0");
  const StableLaw law(spec.y, spec.c_plus, spec.c_minus);
  const double d2 = vartheta_tilde_numeric(spec, abs_tol) +
                    gamma_tilde_numeric(spec, abs_tol) * positive_prob(law);
  return {positive_part_mean(law), 1.0 / spec.y, d2, 1.0, Regime::pure_jump};
}

namespace detail {
inline PriceExpansion mixed_coeffs_impl(double c_total, double y, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("mixed_coeffs: sigma must be positive");
  const double d1 = sigma / std::sqrt(2.0 * M_PI);
  const double d2 = std::pow(2.0, 0.5 * (1.0 - y)) / std::sqrt(M_PI) *
                    gamma_real(1.0 - 0.5 * y) * c_total * std::pow(sigma, 1.0 - y) /
                    (2.0 * y * (y - 1.0));
  return {d1, 0.5, d2, 0.5 * (3.0 - y), Regime::mixed};
}
}  // namespace detail

inline PriceExpansion mixed_coeffs(const CgmyParams& p) {
  return detail::mixed_coeffs_impl(2.0 * p.C, p.Y, p.sigma);
}

inline PriceExpansion mixed_coeffs(const TemperedStableSpec& spec) {
  return detail::mixed_coeffs_impl(spec.c_plus + spec.c_minus, spec.y, spec.sigma);
}

inline double price_expansion_eval(const PriceExpansion& e, double t, double s0) {
  if (!(t > 0.0)) throw std::domain_error("price_expansion_eval: t must be positive");
  return s0 * (e.d1 * std::pow(t, e.exp1) + e.d2 * std::pow(t, e.exp2));
}

/// First-order-only evaluation (for residual comparisons).
inline double price_expansion_eval_order1(const PriceExpansion& e, double t, double s0) {
  if (!(t > 0.0)) throw std::domain_error("price_expansion_eval: t must be positive");
  return s0 * e.d1 * std::pow(t, e.exp1);
}

namespace detail {
inline IvExpansion iv_from_price(const PriceExpansion& pe, double c_total, double y,
                                 double sigma) {
  if (pe.regime == Regime::pure_jump)
    return {std::sqrt(2.0 * M_PI) * pe.d1, 1.0 / y - 0.5, std::sqrt(2.0 * M_PI) * pe.d2, 0.5,
            Regime::pure_jump};
  const double s2 = c_total * std::pow(2.0, -0.5 * y) / (y * (y - 1.0)) *
                    gamma_real(1.0 - 0.5 * y) * std::pow(sigma, 1.0 - y);
  return {sigma, 0.0, s2, 1.0 - 0.5 * y, Regime::mixed};
}
}  // namespace detail

inline IvExpansion iv_expansion(const CgmyParams& p) {
  const PriceExpansion pe = p.pure_jump() ? pure_jump_coeffs(p) : mixed_coeffs(p);
  return detail::iv_from_price(pe, 2.0 * p.C, p.Y, p.sigma);
}

inline IvExpansion iv_expansion(const TemperedStableSpec& spec, double abs_tol = 1e-10) {
  const PriceExpansion pe =
      spec.sigma == 0.0 ? pure_jump_coeffs(spec, abs_tol) : mixed_coeffs(spec);
  return detail::iv_from_price(pe, spec.c_plus + spec.c_minus, spec.y, spec.sigma);
}

inline double iv_expansion_eval(const IvExpansion& e, double t) {
  return e.s1 * std::pow(t, e.exp1) + e.s2 * std::pow(t, e.exp2);
}

}  // namespace levyatm

#endif  // LEVYATM_ASYMPTOTICS_HPP
