#include <doctest.h>

#include <cmath>
#include <vector>

#include "heatlab/bounds.hpp"

using namespace heatlab;

TEST_CASE("zeta values and series branch") {
  CHECK(zeta(0) == 0);
  // direct formula at moderate x
  double x = 0.7;
  CHECK(zeta(x) ==
        doctest::Approx(x * std::asinh(x) + 1 - std::sqrt(x * x + 1)).epsilon(1e-14));
  // series branch x^2/2 - x^4/24 agrees with the direct formula at the switch
  double xs = 1e-4;
  double direct = xs * std::asinh(xs) - xs * xs / (1.0 + std::sqrt(1.0 + xs * xs));
  CHECK(xs * xs / 2 - std::pow(xs, 4) / 24 == doctest::Approx(direct).epsilon(1e-12));
  CHECK(zeta(0.99e-4) < zeta(1.01e-4));
  CHECK(zeta(1e-6) == doctest::Approx(0.5e-12).epsilon(1e-6));
  // small-x quadratic equivalent: 2t zeta(d/2t) ~ d^2/4t
  double d = 3, t = 1000;
  CHECK(2 * t * zeta(d / (2 * t)) == doctest::Approx(d * d / (4 * t)).epsilon(0.01));
}

TEST_CASE("pang envelope orders correctly") {
  for (double t : {0.2, 1.0, 30.0})
    for (double d : {0.0, 1.0, 7.0}) {
      auto [lo, hi] = pang_envelope(d, t, 2.0);
      CHECK(lo < hi);
      auto [lo1, hi1] = pang_envelope(d, t, 1.0);
      CHECK(lo <= lo1);
      CHECK(hi1 <= hi);
    }
}

TEST_CASE("universal and Davies right-hand sides") {
  // rho = 0: RHS reduces to (m_x m_y)^{-1/2}
  CHECK(universal_rhs(4, 9, 0, 1, 1) == doctest::Approx(std::log(1.0 / 6.0)));
  CHECK(davies_rhs(4, 9, 0, 1, 1) == doctest::Approx(std::log(1.0 / 6.0)));
  // decreasing in rho
  CHECK(universal_rhs(1, 1, 3, 1, 1) < universal_rhs(1, 1, 2, 1, 1));
  CHECK(davies_rhs(1, 1, 3, 1, 1) < davies_rhs(1, 1, 2, 1, 1));
}

TEST_CASE("error function closed forms") {
  ErrorParams p{1, 1, 1};
  CHECK(p.c_theta() == doctest::Approx(3.0 * std::cbrt(288.0)).epsilon(1e-12));
  CHECK(p.c_theta() == doctest::Approx(19.8116).epsilon(1e-5));
  CHECK(p.theta(8.0) == doctest::Approx(p.c_theta() / 2.0));
  CHECK(tau_rho(1, 4, 1) ==
        doctest::Approx(0.5 / std::pow(std::asinh(4.0), 2)).epsilon(1e-12));
  CHECK(tau_rho(1, 4, 1) == doctest::Approx(0.11396).epsilon(1e-4));
  // deg <= 1 collapses Phi beyond r to 1
  CHECK(p.log_phi(1.0, 5.0) == 0);
  CHECK(p.log_phi(1.0, 0.5) == 0);  // r^n = 1 at r = 1
}

TEST_CASE("dimension prime closed form") {
  auto logvol = [](double lr) { return std::log(2.0 * std::exp(lr) + 1.0); };
  auto loginv = [](double) { return 0.0; };
  double got = dimension_prime(1, 1e4, logvol, loginv, 0.0);
  double want = std::log(20001.0) /
                (std::log(1e4) - 4.0 * std::log(std::log(1e4)));
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(got == doctest::Approx(30.1).epsilon(1e-2));
  // degenerate denominator rejected (ln r < 4 ln ln r near r = e^2)
  CHECK_THROWS(dimension_prime(1, 7.0, logvol, loginv, 0.0));
}

TEST_CASE("regular function check accepts powers, rejects kinks") {
  std::vector<double> s = {1, 2, 3, 5, 8, 13, 21};
  auto pow2 = [](double x) { return x * x; };
  CHECK(regular_function_check(pow2, s, 1.0, 2.0).regular);
  auto kink = [](double x) { return x < 4 ? x : 100 * x; };
  CHECK(!regular_function_check(kink, s, 1.0, 2.0).regular);
}

TEST_CASE("psi tends to one for large t") {
  ErrorParams p{1, 750, 1.0 / std::sqrt(2.0)};
  double prev = 1e300;
  for (double t : {1e4, 1e8, 1e12, 1e20, 1e30}) {
    double lp = log_psi(t, 1.0, p.S, 2.0, 2.0, p);
    CHECK(lp >= 0);
    CHECK(lp < prev);
    prev = lp;
  }
  CHECK(prev < 1e-3);
}
