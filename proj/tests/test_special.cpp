#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <numbers>

#include "test_helpers.hpp"
#include "wickmix/errors.hpp"
#include "wickmix/special.hpp"
#include "wickmix/verification.hpp"

using namespace wickmix;

TEST_CASE("closed forms and worked values") {
  CHECK(rel_err(bessel_k(0.5, 2.0), std::sqrt(std::numbers::pi / 4) * std::exp(-2.0)) < 1e-13);
  CHECK(bessel_k(0.5, 2.0) == doctest::Approx(0.11993777).epsilon(1e-8));
  CHECK(bessel_k(-3.0, 1.7) == bessel_k(3.0, 1.7));
  CHECK(rel_err(bessel_k(2, 1), bessel_k(0, 1) + 2 * bessel_k(1, 1)) < 1e-12);
}

TEST_CASE("agreement with an independent Bessel implementation") {
  double worst = 0.0;
  for (double lx = -3; lx <= 2.0001; lx += 0.25) {
    const double x = std::pow(10.0, lx);
    for (double nu = 0.0; nu <= 30.0; nu += 0.75) {
      worst = std::max(worst, rel_err(bessel_k(nu, x), boost::math::cyl_bessel_k(nu, x)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("log-space evaluation survives where the value overflows") {
  CHECK_THROWS_AS(bessel_k(400.0, 1e-3), OverflowError);
  const double lk = log_bessel_k(400.0, 1e-3);
  CHECK(std::isfinite(lk));
  CHECK(lk > 700);
  CHECK(rel_err(log_bessel_k(3.0, 2.0), std::log(bessel_k(3.0, 2.0))) < 1e-13);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, -2.0), DomainError);
  CHECK_THROWS_AS(GIGParams(0.0, 1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(GIGParams(1.0, 0.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(gig_density(GIGParams(1, 1, 1), 0.0), DomainError);
}

TEST_CASE("tanh-sinh integrates smooth functions") {
  const auto r = tanh_sinh([](double t) { return std::exp(-t); }, 0.0, 3.0);
  CHECK(rel_err(r.value, 1 - std::exp(-3.0)) < 1e-13);
  CHECK_THROWS_AS(tanh_sinh([](double t) { return std::sin(1e4 * t); }, 0.0, 1.0, 1e-14, 3),
                  QuadratureError);
}

TEST_CASE("GIG density normalizes and peaks at the mode") {
  for (const auto& p : gig_parameter_grid()) {
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return std::exp(u) * gig_density(p, std::exp(u)); }, -40.0, 20.0, 15, 1e-13);
    CHECK(std::abs(total - 1.0) < 1e-9);
    const double m = gig_mode(p);
    CHECK(gig_density(p, m) >= gig_density(p, m * (1 + 1e-4)));
    CHECK(gig_density(p, m) >= gig_density(p, m * (1 - 1e-4)));
    if (p.lambda() >= 1) {
      const double lm1 = p.lambda() - 1;
      CHECK(rel_err(m, (lm1 + std::sqrt(lm1 * lm1 + p.psi() * p.chi())) / p.psi()) < 1e-12);
    }
  }
  const GIGParams ig(1.0, 1.0, -0.5);
  for (double x : {1e-3, 0.1, 1.0, 10.0, 50.0}) CHECK(gig_density(ig, x) > 0);
}

TEST_CASE("GIG moments: worked values, quadrature, recurrence, log-convexity") {
  const GIGParams p(2.0, 3.0, 1.0);
  CHECK(gig_moment(p, 0) == 1.0);
  CHECK(rel_err(gig_moment(p, 1), gig_moment_quadrature(p, 1)) < 1e-8);
  CHECK(gig_moment_quadrature(p, 1) > 0);
  CHECK(std::abs(gig_moment_quadrature(p, 0) - 1) < 1e-9);

  for (const auto& q : gig_parameter_grid()) {
    const auto ms = gig_moments_upto(q, 9);
    CHECK(ms[0] == 1.0);
    for (int l = 1; l <= 8; ++l) {
      CHECK(rel_err(gig_moment(q, l), gig_moment_quadrature(q, l)) < 1e-8);
      CHECK(rel_err(ms[l], gig_moment(q, l)) < 1e-10);
      const double rhs = q.chi() / q.psi() * ms[l - 1] + 2 * (q.lambda() + l) / q.psi() * ms[l];
      CHECK(rel_err(ms[l + 1], rhs) < 1e-9);
      CHECK(ms[l - 1] * ms[l + 1] >= ms[l] * ms[l]);
    }
  }
}

TEST_CASE("GIG CDF by quadrature") {
  const GIGParams p(1.0, 2.0, 0.5);
  CHECK(gig_cdf_quadrature(p, 1e-6) < 1e-12);
  CHECK(gig_cdf_quadrature(p, 1e3) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> xs{0.1, 0.5, 1.0, 1.01, 3.0, 9.0};
  const auto sorted = gig_cdf_quadrature_sorted(p, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(sorted[i] - gig_cdf_quadrature(p, xs[i])) < 1e-10);
  }
}
