#pragma once

#include <functional>
#include <vector>

namespace wickmix {

/// Tanh-sinh (double-exponential) quadrature of a smooth integrand on a
/// finite interval [a, b]. The step is halved until two successive levels
/// agree to `rel_tol`; throws QuadratureError if `max_levels` is reached.
struct TanhSinhResult {
  double value;
  double error_estimate;
  int levels;
};
TanhSinhResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-14, int max_levels = 12);

/// log K_nu(x) for x > 0 and any real nu, from
///   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
/// The integrand is scaled by its peak and truncated where it falls below
/// 1e-320 of the peak, then integrated on both sides of the peak by tanh-sinh.
/// Throws DomainError for x <= 0 or non-finite arguments.
double log_bessel_k(double nu, double x);

/// K_nu(x); even in nu. Throws OverflowError instead of returning infinity.
double bessel_k(double nu, double x);

/// GIG(psi, chi, lambda) on (0, inf), density proportional to
/// x^(lambda-1) exp(-(chi/x + psi x)/2). Both psi and chi must be strictly
/// positive; the gamma and inverse-gamma limits are not representable.
class GIGParams {
 public:
  GIGParams(double psi, double chi, double lambda);

  [[nodiscard]] double psi() const noexcept { return psi_; }
  [[nodiscard]] double chi() const noexcept { return chi_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  /// sqrt(psi * chi), the Bessel argument.
  [[nodiscard]] double omega() const noexcept;
  /// sqrt(chi / psi), the scale of the standardized law.
  [[nodiscard]] double scale() const noexcept;

  friend bool operator==(const GIGParams&, const GIGParams&) = default;

 private:
  double psi_;
  double chi_;
  double lambda_;
};

double gig_log_density(const GIGParams& params, double x);
double gig_density(const GIGParams& params, double x);

/// Location of the density maximum.
double gig_mode(const GIGParams& params);

/// m_l = E[(sigma^2)^l] = (chi/psi)^(l/2) K_{lambda+l}(omega) / K_lambda(omega).
/// m_0 is exactly 1. Throws OverflowError when m_l exceeds the double range.
double gig_moment(const GIGParams& params, int order);

/// m_0 .. m_max_order, seeded by two direct Bessel evaluations and extended
/// with the three-term recurrence
///   m_{l+1} = (chi/psi) m_{l-1} + 2 (lambda + l) / psi * m_l.
std::vector<double> gig_moments_upto(const GIGParams& params, int max_order);

/// Independent check of gig_moment: adaptive Gauss-Kronrod integration of
/// x^l f(x) on the log axis u = log x, relative target 1e-9 (the integrand
/// is the normalized density, so order 0 checks normalization).
double gig_moment_quadrature(const GIGParams& params, int order);

/// P(sigma^2 <= x) by the same log-axis quadrature.
double gig_cdf_quadrature(const GIGParams& params, double x);

/// CDF at each of the ascending points `sorted_x`, integrating piecewise
/// between consecutive points. Linear cost in the number of points.
std::vector<double> gig_cdf_quadrature_sorted(const GIGParams& params,
                                              const std::vector<double>& sorted_x);

}  // namespace wickmix
