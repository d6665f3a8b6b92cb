#include "heatlab/line_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/logdomain.hpp"

namespace heatlab {
namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kWeights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <typename F>
double gl15(const F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 15; ++i) s += kWeights[i] * f(c + h * kNodes[i]);
  return s * h;
}

// The integrand is nonnegative, so accepting each subinterval at relative
// accuracy `tol` bounds the global relative error by tol (sum of |delta| over
// accepted leaves <= tol * integral). An absolute tolerance derived from a
// coarse whole-interval pass fails here: sharply peaked integrands make that
// pass underestimate by orders of magnitude and the recursion degenerates.
// `negligible` is an absolute cutoff far below any possible contribution of
// the peak region; without it the recursion chases relative accuracy inside
// the gradual-underflow band, where it is unattainable.
template <typename F>
double adaptive(const F& f, double a, double b, double whole, double tol,
                double negligible, int depth) {
  double m = 0.5 * (a + b);
  double left = gl15(f, a, m), right = gl15(f, m, b);
  double sum = left + right;
  double delta = sum - whole;
  if (std::abs(delta) <= tol * std::abs(sum) || std::abs(sum) <= negligible ||
      depth > 40)
    return sum;
  return adaptive(f, a, m, left, tol, negligible, depth + 1) +
         adaptive(f, m, b, right, tol, negligible, depth + 1);
}

}  // namespace

double log_exact_integer_line_kernel(long d, double t) {
  if (d < 0) throw GraphError("distance must be nonnegative");
  if (!(t > 0)) throw GraphError("time must be positive");
  // z = sin(theta): integrand cos^{2d}(theta) e^{-2t(1-sin theta)}, with the
  // e^{2t} peak factored out of the displayed formula.
  // Near th = pi/2 both cos(th) and 1 - sin(th) vanish; computing them
  // directly leaves only absolute accuracy, which stalls the adaptive
  // refinement. With u = half_pi - th (an exact subtraction for
  // th >= half_pi/2) the forms sin(u) and 2 sin^2(u/2) keep full relative
  // accuracy all the way into the corner.
  const double half_pi = std::acos(-1.0) / 2.0;
  auto f = [&](double th) {
    double c, one_minus_sin;
    if (th > 0.5 * half_pi) {
      double u = half_pi - th;
      c = std::sin(u);
      double h = std::sin(0.5 * u);
      one_minus_sin = 2.0 * h * h;
    } else {
      c = std::cos(th);
      one_minus_sin = 1.0 - std::sin(th);
    }
    double base = d == 0 ? 1.0 : std::pow(c, 2.0 * static_cast<double>(d));
    return base * std::exp(-2.0 * t * one_minus_sin);
  };
  // Stationary point of cos^{2d} e^{2t sin}: t sin^2 + d sin - t = 0.
  double s = (-static_cast<double>(d) +
              std::sqrt(static_cast<double>(d) * d + 4.0 * t * t)) /
             (2.0 * t);
  double fpeak = f(std::asin(std::min(1.0, s)));
  double rough = gl15(f, -half_pi, half_pi);
  double j = adaptive(f, -half_pi, half_pi, rough, 1e-13, 1e-60 * fpeak, 0);
  return d * std::log(t) - std::lgamma(d + 0.5) - 0.5 * std::log(std::acos(-1.0)) +
         std::log(j);
}

double exact_integer_line_kernel(long d, double t) {
  return std::exp(log_exact_integer_line_kernel(d, t));
}

double log_scaled_bessel_i(long d, double t) {
  if (d < 0) throw GraphError("order must be nonnegative");
  if (!(t > 0)) throw GraphError("time must be positive");
  // I_d(2t) = sum_k t^{2k+d} / (k! (k+d)!)
  const double lt = std::log(t);
  std::vector<double> terms;
  double peak = kLogZero;
  for (long k = 0;; ++k) {
    double a = (2.0 * k + d) * lt - std::lgamma(k + 1.0) - std::lgamma(k + d + 1.0);
    terms.push_back(a);
    peak = std::max(peak, a);
    if (k > t && a < peak - 60.0) break;
  }
  double s = 0;
  for (double a : terms) s += std::exp(a - peak);
  return peak + std::log(s) - 2.0 * t;
}

}  // namespace heatlab
