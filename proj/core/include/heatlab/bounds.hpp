#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace heatlab {

// zeta(x) = x arsinh(x) + 1 - sqrt(x^2+1), the universal Gaussian exponent
// shape. Series branch below 1e-4 avoids cancellation.
double zeta(double x);

// Pang's two-sided envelope on the integer line:
//   (c^{-1} resp. c) / (sqrt(t) v d) * exp(-2t zeta(d/2t)).
// Returns {log lower, log upper}.
std::pair<double, double> pang_envelope(double d, double t, double c);

// Universal bound RHS: (m_x m_y)^{-1/2} exp(-(t/S^2) zeta(rho S / t)).
double universal_rhs(double m_x, double m_y, double rho, double t, double S);

// Davies RHS: (m_x m_y)^{-1/2} exp(-(2t/S^2) zeta(rho_E S / (2t))).
double davies_rhs(double m_x, double m_y, double rho_e, double t, double S);

struct ErrorParams {
  double n;  // dimension
  double r;  // Faber-Krahn radius
  double S;  // jump size

  double c_theta() const;            // (288 S)^{1/(n+2)} (n+2)
  double theta(double s) const;      // C_theta s^{-1/(n+2)}
  // ln Phi_x(s): r^n [1 v Deg]^{n/2+theta(r)} for s < r, else [1 v Deg]^{theta(s)}.
  double log_phi(double deg_x, double s) const;
};

// tau_rho = S^2 / (2 arsinh^2((sqrt(t) v rho) S / t)).
double tau_rho(double t, double rho, double S);

// ln Psi_xy(sqrt t), Psi^2 = Phi_x(sqrt tau_rho) Phi_y(sqrt tau_rho).
double log_psi(double t, double rho, double S, double deg_x, double deg_y,
               const ErrorParams& p);

// (G) RHS in log-domain:
//   Psi (1 v (t/S^2) arsinh^2(rho S/t))^{N/2} / sqrt(vol_x vol_y)
//   * exp(-(t/S^2) zeta(rho S/t)).
double g_rhs(double vol_x, double vol_y, double rho, double t, double S,
             double psi_log, double N);

// (VD) RHS in log-domain: Phi * (R/r)^N, Phi given as a log value.
double vd_rhs(double phi_log, double N, double r, double R);

// (FK) RHS in log-domain: (a/R^2) (m_B/m_U)^{2/N}.
double fk_rhs(double a, double N, double R, double m_B, double m_U);

// n'_o(r) = n v ln[m(B_o(Ar)) ||1/m||_{B_o(Ar)}] / ln(r/(ln r)^{n+3}),
// ln A = 2^{19n} e unless overridden. Callables take ln(radius) and return
// ln(volume) resp. ln ||1/m||, since Ar is far beyond any finite truncation.
double dimension_prime(double n, double r,
                       const std::function<double(double)>& log_volume_at,
                       const std::function<double(double)>& log_inv_inf_measure_at,
                       std::optional<double> ln_a_override = std::nullopt);

// (A,gamma)-regularity of f: f(gamma s)/f(s) <= A f(gamma t)/f(t) for s < t,
// checked over all sampled pairs.
struct RegularityReport {
  bool regular = true;
  double worst_ratio = 0;  // max of [f(gs)/f(s)] / [A f(gt)/f(t)]
  double worst_s = 0, worst_t = 0;
};
RegularityReport regular_function_check(const std::function<double(double)>& f,
                                        const std::vector<double>& samples, double A,
                                        double gamma);

// Anti-tree display right-hand sides (log-domain, C excluded from
// the first, included in the second via both placements).
double antitree_rhs1(double n, double rho_ox, double rho_oy, double rho_xy, double t,
                     double vol_root_sqrt_t);
double antitree_rhs2(double n, double gamma, double d_ox, double d_oy, double t, double C);

}  // namespace heatlab
