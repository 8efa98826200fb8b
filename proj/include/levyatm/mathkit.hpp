#ifndef LEVYATM_MATHKIT_HPP
#define LEVYATM_MATHKIT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyatm {

/// Quadrature failed to reach the requested tolerance; carries what was achieved.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved_tol)
      : std::runtime_error(what), achieved(achieved_tol) {}
  double achieved;
};

/// Non-finite value met at a quadrature node; carries the offending node.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double at_node)
      : std::runtime_error(what), node(at_node) {}
  double node;
};

// ---------------------------------------------------------------------------
// Gamma function (real argument, Lanczos g=7 n=9, reflection for x < 1/2)
// ---------------------------------------------------------------------------

inline double gamma_real(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma_real: pole at non-positive integer " + std::to_string(x));
  static constexpr double kCoef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    return M_PI / (std::sin(M_PI * x) * gamma_real(1.0 - x));
  }
  const double z = x - 1.0;
  double a = kCoef[0];
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// ---------------------------------------------------------------------------
// Principal-branch complex power
// ---------------------------------------------------------------------------

inline std::complex<double> complex_pow(std::complex<double> base, double exponent) {
  if (base == std::complex<double>(0.0, 0.0))
    throw std::domain_error("complex_pow: zero base");
  // exp(p (ln|z| + i Arg z)), Arg in (-pi, pi]
  return std::exp(exponent * std::log(base));
}

// ---------------------------------------------------------------------------
// Simpson grid with the asymmetric IFT weight pattern
//
// Interior weights alternate 4/3 (odd index) / 2/3 (even index) with both
// endpoint weights equal to 1/2; the terminal 1/2 completes the published
// pattern so that constants integrate exactly (the raw pattern leaves the
// weight sum at P - 1/6 instead of P - 1).  The rule is first-order accurate
// at the boundary, which is immaterial for integrands vanishing there.
// ---------------------------------------------------------------------------

struct QuadratureGrid {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n_points = 0;
  std::vector<double> weights;

  static QuadratureGrid make(double lower, double upper, std::size_t n_points) {
    if (n_points < 4 || n_points % 2 != 0)
      throw std::invalid_argument("QuadratureGrid: n_points must be even and >= 4");
    if (!(upper > lower))
      throw std::invalid_argument("QuadratureGrid: upper must exceed lower");
    QuadratureGrid g;
    g.lower = lower;
    g.upper = upper;
    g.n_points = n_points;
    g.weights.resize(n_points);
    for (std::size_t m = 0; m < n_points; ++m)
      g.weights[m] = (m % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    g.weights.front() = 0.5;
    g.weights.back() = 0.5;
    return g;
  }

  double step() const { return (upper - lower) / static_cast<double>(n_points - 1); }
};

template <typename F>
std::complex<double> simpson_integrate(F&& f, const QuadratureGrid& grid) {
  const double delta = grid.step();
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t m = 0; m < grid.n_points; ++m) {
    const double v = grid.lower + static_cast<double>(m) * delta;
    const std::complex<double> fv = f(v);
    if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
      throw numeric_error("simpson_integrate: non-finite integrand", v);
    acc += grid.weights[m] * fv;
  }
  return delta * acc;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7-15) quadrature
// ---------------------------------------------------------------------------

namespace detail {

// QUADPACK dqk15 nodes/weights on [-1, 1] (positive half).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
  double integral;
  double error;
};

template <typename F>
GkEstimate gk15(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double res_g = fc * kG7Weights[3];
  double res_k = fc * kGk15Weights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGk15Nodes[j];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    res_k += kGk15Weights[j] * (f1 + f2);
    if (j % 2 == 1) res_g += kG7Weights[(j - 1) / 2] * (f1 + f2);
  }
  res_k *= half;
  res_g *= half;
  return {res_k, std::abs(res_k - res_g)};
}

struct Segment {
  double a, b, integral, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
double adaptive_core(F& f, double a, double b, double abs_tol, std::size_t max_segments = 4000) {
  std::priority_queue<Segment> heap;
  GkEstimate first = gk15(f, a, b);
  heap.push({a, b, first.integral, first.error});
  double total = first.integral;
  double total_err = first.error;
  std::size_t n = 1;
  while (total_err > abs_tol && n < max_segments) {
    Segment worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // interval exhausted at machine precision
      heap.push({worst.a, worst.b, worst.integral, 0.0});
      total_err -= worst.error;
      continue;
    }
    GkEstimate left = gk15(f, worst.a, m);
    GkEstimate right = gk15(f, m, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    heap.push({worst.a, m, left.integral, left.error});
    heap.push({m, worst.b, right.integral, right.error});
    ++n;
  }
  if (total_err > abs_tol)
    throw accuracy_error("adaptive_quad: tolerance not reached", total_err);
  return total;
}

}  // namespace detail

/// Adaptive quadrature of f over [lower, upper]; upper may be +infinity
/// (mapped through x = tan(u)).  With singular_endpoints set, a power-law
/// substitution grades the mesh toward both finite endpoints so integrands
/// with integrable endpoint singularities (e.g. |x|^{1-Y}) converge quickly.
inline double adaptive_quad(const std::function<double(double)>& f, double lower, double upper,
                            double abs_tol = 1e-10, bool singular_endpoints = false) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_quad: abs_tol must be positive");
  if (std::isinf(upper)) {
    // x = tan(u) maps [atan(lower), pi/2) onto [lower, inf)
    auto g = [&f](double u) {
      const double c = std::cos(u);
      const double x = std::tan(u);
      return f(x) / (c * c);
    };
    std::function<double(double)> gf = g;
    const double u0 = std::atan(lower);
    const double u1 = 0.5 * M_PI;
    if (singular_endpoints) {
      // grade toward u0 (the image of a singular lower endpoint); the
      // tan-map already compresses the upper end
      const double um = 0.5 * (u0 + u1);
      auto lo = [&gf, u0, um](double s) {
        const double s3 = s * s * s;
        return gf(u0 + s3 * s) * 4.0 * s3;
      };
      std::function<double(double)> lof = lo;
      const double w = std::pow(um - u0, 0.25);
      return detail::adaptive_core(lof, 0.0, w, 0.5 * abs_tol) +
             detail::adaptive_core(gf, um, u1, 0.5 * abs_tol);
    }
    return detail::adaptive_core(gf, u0, u1, abs_tol);
  }
  if (!(upper > lower)) throw std::invalid_argument("adaptive_quad: upper must exceed lower");
  std::function<double(double)> ff = f;
  if (singular_endpoints) {
    // split at the midpoint and substitute x = end -/+ s^4 on each half
    const double m = 0.5 * (lower + upper);
    auto lo = [&f, lower](double s) {
      const double s3 = s * s * s;
      return f(lower + s3 * s) * 4.0 * s3;
    };
    auto hi = [&f, upper](double s) {
      const double s3 = s * s * s;
      return f(upper - s3 * s) * 4.0 * s3;
    };
    std::function<double(double)> lof = lo, hif = hi;
    const double w = std::pow(m - lower, 0.25);
    return detail::adaptive_core(lof, 0.0, w, 0.5 * abs_tol) +
           detail::adaptive_core(hif, 0.0, std::pow(upper - m, 0.25), 0.5 * abs_tol);
  }
  return detail::adaptive_core(ff, lower, upper, abs_tol);
}

}  // namespace levyatm

#endif  // LEVYATM_MATHKIT_HPP
