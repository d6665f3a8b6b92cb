#pragma once

namespace heatlab {

// Heat kernel on the integer line (b = 1, m = 1) at combinatorial distance d:
//   p_t(d) = (1/(sqrt(pi) Gamma(d+1/2))) e^{-2t} t^d
//            * Integral_{-1}^{1} (1-z^2)^{d-1/2} e^{2tz} dz,
// evaluated by adaptive Gauss-Legendre quadrature after z = sin(theta)
// (relative tolerance 1e-12). Equals e^{-2t} I_d(2t).
double exact_integer_line_kernel(long d, double t);
double log_exact_integer_line_kernel(long d, double t);

// ln(e^{-2t} I_d(2t)) by the modified Bessel series, log-domain.
// Independent cross-check of the quadrature route.
double log_scaled_bessel_i(long d, double t);

}  // namespace heatlab
