#include "wickmix/special.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wickmix/errors.hpp"

namespace wickmix {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
// log(1e-320): truncation level of the Bessel integrand relative to its peak.
const double kBesselTruncation = std::log(1e-320);
const double kLogMaxDouble = std::log(std::numeric_limits<double>::max());

}  // namespace

TanhSinhResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, int max_levels) {
  if (a == b) return {0.0, 0.0, 0};
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  constexpr double t_max = 4.0;

  // Contribution of the abscissae +-t with step-independent weight.
  auto pair_sum = [&](double t) {
    const double u = 0.5 * kPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double weight = 0.5 * kPi * std::cosh(t) / (cu * cu);
    if (!(weight > 1e-300)) return 0.0;
    // Distance to the endpoint in [a, b] units: half * (1 - tanh u).
    const double comp = half * 2.0 / (1.0 + std::exp(2.0 * u));
    double s = 0.0;
    if (comp > 0.0) s = f(a + comp) + f(b - comp);
    return weight * s;
  };

  double h = 1.0;
  double sum = 0.5 * kPi * f(center);  // weight at t = 0
  for (double t = h; t <= t_max; t += h) sum += pair_sum(t);
  double estimate = h * half * sum;
  double error = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2 * h) sum += pair_sum(t);
    const double next = h * half * sum;
    error = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= rel_tol * std::abs(estimate)) {
      return {estimate, error, level};
    }
  }
  if (error <= 1e-300) return {estimate, error, max_levels};
  throw QuadratureError("tanh-sinh did not converge on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "], last difference " + std::to_string(error));
}

namespace {

// log cosh(y) for y >= 0 without overflow.
double log_cosh(double y) { return y + std::log1p(std::exp(-2.0 * y)) - kLn2; }

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x)) throw DomainError("bessel_k: non-finite argument");
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be > 0, got " + std::to_string(x));
  nu = std::abs(nu);

  auto log_integrand = [&](double t) { return -x * std::cosh(t) + log_cosh(nu * t); };

  // Peak of the integrand: root of nu tanh(nu t) = x sinh(t), or t = 0 when
  // nu^2 <= x (the log-integrand is then decreasing on t > 0).
  double peak_t = 0.0;
  if (nu * nu > x) {
    double lo = 0.0;
    double hi = std::asinh(nu / x);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (nu * std::tanh(nu * mid) - x * std::sinh(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    peak_t = 0.5 * (lo + hi);
  }
  const double peak = log_integrand(peak_t);

  // Truncation point beyond the peak.
  double step = 1.0;
  double upper = peak_t + step;
  while (log_integrand(upper) - peak > kBesselTruncation) {
    step *= 2.0;
    upper = peak_t + step;
  }
  double inside = peak_t;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (inside + upper);
    if (log_integrand(mid) - peak > kBesselTruncation) {
      inside = mid;
    } else {
      upper = mid;
    }
  }

  auto scaled = [&](double t) { return std::exp(log_integrand(t) - peak); };
  double integral = tanh_sinh(scaled, peak_t, upper).value;
  if (peak_t > 0.0) integral += tanh_sinh(scaled, 0.0, peak_t).value;
  return peak + std::log(integral);
}

double bessel_k(double nu, double x) {
  const double log_value = log_bessel_k(nu, x);
  if (log_value > kLogMaxDouble) {
    throw OverflowError("bessel_k(" + std::to_string(nu) + ", " + std::to_string(x) +
                        ") exceeds the double range (log value " + std::to_string(log_value) +
                        ")");
  }
  return std::exp(log_value);
}

// ---------------------------------------------------------------------------

GIGParams::GIGParams(double psi, double chi, double lambda)
    : psi_(psi), chi_(chi), lambda_(lambda) {
  if (!(psi > 0.0) || !std::isfinite(psi)) {
    throw ContractViolation("GIG psi must be finite and > 0, got " + std::to_string(psi));
  }
  if (!(chi > 0.0) || !std::isfinite(chi)) {
    throw ContractViolation("GIG chi must be finite and > 0, got " + std::to_string(chi));
  }
  if (!std::isfinite(lambda)) throw ContractViolation("GIG lambda must be finite");
}

double GIGParams::omega() const noexcept { return std::sqrt(psi_ * chi_); }
double GIGParams::scale() const noexcept { return std::sqrt(chi_ / psi_); }

namespace {

double log_normalizer(const GIGParams& p) {
  return 0.5 * p.lambda() * std::log(p.psi() / p.chi()) - kLn2 - log_bessel_k(p.lambda(), p.omega());
}

// Positive root of psi y^2 - 2 a y - chi = 0, stable for either sign of a.
double positive_root(double a, double psi, double chi) {
  const double disc = std::sqrt(a * a + psi * chi);
  return a >= 0.0 ? (a + disc) / psi : chi / (disc - a);
}

}  // namespace

double gig_log_density(const GIGParams& params, double x) {
  if (!(x > 0.0)) throw DomainError("gig_density: x must be > 0");
  return log_normalizer(params) + (params.lambda() - 1.0) * std::log(x) -
         0.5 * (params.chi() / x + params.psi() * x);
}

double gig_density(const GIGParams& params, double x) {
  return std::exp(gig_log_density(params, x));
}

double gig_mode(const GIGParams& params) {
  return positive_root(params.lambda() - 1.0, params.psi(), params.chi());
}

double gig_moment(const GIGParams& params, int order) {
  if (order < 0) throw ContractViolation("gig_moment: order must be >= 0");
  if (order == 0) return 1.0;
  const double omega = params.omega();
  const double log_m = 0.5 * order * std::log(params.chi() / params.psi()) +
                       log_bessel_k(params.lambda() + order, omega) -
                       log_bessel_k(params.lambda(), omega);
  if (log_m > kLogMaxDouble) {
    throw OverflowError("GIG moment of order " + std::to_string(order) +
                        " exceeds the double range");
  }
  return std::exp(log_m);
}

std::vector<double> gig_moments_upto(const GIGParams& params, int max_order) {
  if (max_order < 0) throw ContractViolation("gig_moments_upto: max_order must be >= 0");
  std::vector<double> m(static_cast<std::size_t>(max_order) + 1);
  // Upward recurrence in the Bessel order is stable only once lambda + l is
  // past zero; evaluate directly until then.
  const int direct_until =
      std::min(max_order, std::max(1, static_cast<int>(std::ceil(-params.lambda())) + 1));
  for (int l = 0; l <= direct_until; ++l) m[l] = gig_moment(params, l);
  const double ratio = params.chi() / params.psi();
  for (int l = direct_until; l < max_order; ++l) {
    m[l + 1] = ratio * m[l - 1] + 2.0 * (params.lambda() + l) / params.psi() * m[l];
    if (!std::isfinite(m[l + 1])) {
      throw OverflowError("GIG moment of order " + std::to_string(l + 1) +
                          " exceeds the double range");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

// x^order f(x) dx in the variable u = log x, as a log value.
struct LogAxisIntegrand {
  double log_const;
  double power;  // order + lambda
  double psi;
  double chi;

  double operator()(double u) const {
    return log_const + power * u - 0.5 * (chi * std::exp(-u) + psi * std::exp(u));
  }
};

constexpr double kTailDrop = 50.0;  // e^-50 ~ 2e-22 relative to the peak

double integrate_log_axis(const GIGParams& params, int order, double u_limit) {
  const LogAxisIntegrand g{log_normalizer(params), order + params.lambda(), params.psi(),
                           params.chi()};
  // g is concave in u; its maximum over (-inf, u_limit] sits at min(peak, u_limit).
  const double u_peak = std::log(positive_root(g.power, params.psi(), params.chi()));
  const double u_top = std::min(u_peak, u_limit);
  const double top = g(u_top);

  double width = 1.0;
  while (g(u_top - width) - top > -kTailDrop) width *= 2.0;
  const double lower = u_top - width;
  double upper = u_limit;
  if (u_limit > u_peak) {
    width = 1.0;
    while (g(u_peak + width) - top > -kTailDrop) width *= 2.0;
    upper = std::min(u_limit, u_peak + width);
  }

  auto scaled = [&](double u) { return std::exp(g(u) - top); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      scaled, lower, upper, 20, 1e-12, &error);
  if (!(error <= 1e-9 * std::abs(value)) && value != 0.0) {
    throw QuadratureError("GIG quadrature did not reach 1e-9 relative (order " +
                          std::to_string(order) + ", estimate " + std::to_string(error) + ")");
  }
  return std::exp(top) * value;
}

}  // namespace

double gig_moment_quadrature(const GIGParams& params, int order) {
  if (order < 0) throw ContractViolation("gig_moment_quadrature: order must be >= 0");
  return integrate_log_axis(params, order, std::numeric_limits<double>::infinity());
}

double gig_cdf_quadrature(const GIGParams& params, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::min(1.0, integrate_log_axis(params, 0, std::log(x)));
}

std::vector<double> gig_cdf_quadrature_sorted(const GIGParams& params,
                                              const std::vector<double>& sorted_x) {
  std::vector<double> out;
  out.reserve(sorted_x.size());
  if (sorted_x.empty()) return out;
  if (!std::is_sorted(sorted_x.begin(), sorted_x.end())) {
    throw ContractViolation("gig_cdf_quadrature_sorted: points must be ascending");
  }
  const LogAxisIntegrand g{log_normalizer(params), params.lambda(), params.psi(), params.chi()};
  auto density_in_u = [&](double u) { return std::exp(g(u)); };

  double cdf = gig_cdf_quadrature(params, sorted_x.front());
  out.push_back(cdf);
  for (std::size_t i = 1; i < sorted_x.size(); ++i) {
    const double a = sorted_x[i - 1];
    const double b = sorted_x[i];
    if (b > a && a > 0.0) {
      const double ua = std::log(a);
      const double ub = std::log(b);
      // Narrow gaps are resolved by a fixed rule; wide tail gaps go adaptive.
      cdf += ub - ua < 0.05
                 ? boost::math::quadrature::gauss<double, 10>::integrate(density_in_u, ua, ub)
                 : boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                       density_in_u, ua, ub, 10, 1e-12);
    }
    out.push_back(std::min(cdf, 1.0));
  }
  return out;
}

}  // namespace wickmix
