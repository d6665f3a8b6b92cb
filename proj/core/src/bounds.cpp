#include "heatlab/bounds.hpp"

#include <cmath>
#include <limits>

#include "heatlab/graph.hpp"
#include "heatlab/logdomain.hpp"

namespace heatlab {

double zeta(double x) {
  if (x < 0) throw GraphError("zeta domain: x >= 0");
  if (x < 1e-4) return x * x / 2.0 - x * x * x * x / 24.0;
  // x asinh(x) + 1 - sqrt(1+x^2), with the cancellation-free difference
  // 1 - sqrt(1+x^2) = -x^2/(1 + sqrt(1+x^2)).
  double s = std::sqrt(1.0 + x * x);
  return x * std::asinh(x) - x * x / (1.0 + s);
}

std::pair<double, double> pang_envelope(double d, double t, double c) {
  if (d < 0 || !(t > 0)) throw GraphError("pang_envelope domain");
  if (c < 1) throw GraphError("pang constant must be >= 1");
  double base = -std::log(std::max(std::sqrt(t), d)) - 2.0 * t * zeta(d / (2.0 * t));
  return {base - std::log(c), base + std::log(c)};
}

double universal_rhs(double m_x, double m_y, double rho, double t, double S) {
  if (!(m_x > 0) || !(m_y > 0)) throw GraphError("measures must be positive");
  if (!(S > 0) || rho < 0) throw GraphError("universal_rhs domain");
  if (t == 0) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log(m_x * m_y) - (t / (S * S)) * zeta(rho * S / t);
}

double davies_rhs(double m_x, double m_y, double rho_e, double t, double S) {
  if (!(m_x > 0) || !(m_y > 0)) throw GraphError("measures must be positive");
  if (!(S > 0) || rho_e < 0) throw GraphError("davies_rhs domain");
  if (t == 0) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log(m_x * m_y) -
         (2.0 * t / (S * S)) * zeta(rho_e * S / (2.0 * t));
}

double ErrorParams::c_theta() const {
  return std::pow(288.0 * S, 1.0 / (n + 2.0)) * (n + 2.0);
}

double ErrorParams::theta(double s) const {
  if (!(s > 0)) throw GraphError("theta domain: s > 0");
  return c_theta() * std::pow(s, -1.0 / (n + 2.0));
}

double ErrorParams::log_phi(double deg_x, double s) const {
  if (!(s > 0)) throw GraphError("phi domain: s > 0");
  double ld = std::log(std::max(1.0, deg_x));
  if (s < r) return n * std::log(r) + (n / 2.0 + theta(r)) * ld;
  return theta(s) * ld;
}

double tau_rho(double t, double rho, double S) {
  if (!(t > 0)) throw GraphError("tau_rho domain: t > 0");
  double a = std::asinh((std::max(std::sqrt(t), rho)) * S / t);
  return S * S / (2.0 * a * a);
}

double log_psi(double t, double rho, double S, double deg_x, double deg_y,
               const ErrorParams& p) {
  double s = std::sqrt(tau_rho(t, rho, S));
  return 0.5 * (p.log_phi(deg_x, s) + p.log_phi(deg_y, s));
}

double g_rhs(double vol_x, double vol_y, double rho, double t, double S,
             double psi_log, double N) {
  if (!(vol_x > 0) || !(vol_y > 0)) throw GraphError("volumes must be positive");
  if (t == 0) return std::numeric_limits<double>::infinity();
  double a = std::asinh(rho * S / t);
  double poly = std::max(1.0, (t / (S * S)) * a * a);
  return psi_log + (N / 2.0) * std::log(poly) - 0.5 * std::log(vol_x * vol_y) -
         (t / (S * S)) * zeta(rho * S / t);
}

double vd_rhs(double phi_log, double N, double r, double R) {
  if (!(r > 0) || R < r) throw GraphError("vd_rhs needs 0 < r <= R");
  return phi_log + N * std::log(R / r);
}

double fk_rhs(double a, double N, double R, double m_B, double m_U) {
  if (!(a > 0) || !(R > 0)) throw GraphError("fk_rhs domain");
  if (!(m_U > 0) || m_U > m_B) throw GraphError("fk_rhs needs 0 < m_U <= m_B");
  return std::log(a) - 2.0 * std::log(R) + (2.0 / N) * std::log(m_B / m_U);
}

double dimension_prime(double n, double r,
                       const std::function<double(double)>& log_volume_at,
                       const std::function<double(double)>& log_inv_inf_measure_at,
                       std::optional<double> ln_a_override) {
  if (!(n > 0) || !(r > 1)) throw GraphError("dimension_prime domain");
  double denom = std::log(r) - (n + 3.0) * std::log(std::log(r));
  if (!(denom > 0))
    throw GraphError("dimension_prime: r <= (ln r)^(n+3), denominator not positive");
  double ln_a = ln_a_override ? *ln_a_override
                              : std::pow(2.0, 19.0 * n) * std::exp(1.0);
  double ln_ar = ln_a + std::log(r);
  double numer = log_volume_at(ln_ar) + log_inv_inf_measure_at(ln_ar);
  return std::max(n, numer / denom);
}

RegularityReport regular_function_check(const std::function<double(double)>& f,
                                        const std::vector<double>& samples, double A,
                                        double gamma) {
  if (A < 1 || gamma < 1) throw GraphError("regularity needs A, gamma >= 1");
  RegularityReport rep;
  std::vector<double> ratio(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double s = samples[i];
    double fs = f(s), fgs = f(gamma * s);
    if (!(fs > 0) || !(fgs > 0)) throw GraphError("regularity needs positive samples");
    ratio[i] = fgs / fs;
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (!(samples[i] < samples[j])) continue;
      double q = ratio[i] / (A * ratio[j]);
      if (q > rep.worst_ratio) {
        rep.worst_ratio = q;
        rep.worst_s = samples[i];
        rep.worst_t = samples[j];
      }
    }
  rep.regular = rep.worst_ratio <= 1.0 + 1e-12;
  return rep;
}

double antitree_rhs1(double n, double rho_ox, double rho_oy, double rho_xy, double t,
                     double vol_root_sqrt_t) {
  if (!(t > 0) || !(vol_root_sqrt_t > 0)) throw GraphError("antitree_rhs1 domain");
  double p1 = (n / 2.0) * std::log1p((rho_ox * rho_ox + rho_oy * rho_oy) / t);
  double stretch = std::sqrt(t * t + rho_xy * rho_xy) - t;
  double p2 = (n / 2.0) * std::log(std::max(1.0, stretch));
  return p1 + p2 - std::log(vol_root_sqrt_t) - t * zeta(rho_xy / t);
}

double antitree_rhs2(double n, double gamma, double d_ox, double d_oy, double t,
                     double C) {
  if (!(t > 0) || !(C > 0)) throw GraphError("antitree_rhs2 domain");
  double e = 0.5 * (2.0 - gamma);
  double diff = std::pow(d_ox, e) - std::pow(d_oy, e);
  double poly = std::log1p((std::pow(d_ox, 2.0 * (gamma + 1.0)) +
                            std::pow(d_oy, 2.0 * (gamma + 1.0))) /
                           std::pow(t, n));
  return std::log(C) + poly - (n / 2.0) * std::log(t) - diff * diff / (C * t);
}

}  // namespace heatlab
