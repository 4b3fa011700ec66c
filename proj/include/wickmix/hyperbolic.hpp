#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "wickmix/combinatorics.hpp"
#include "wickmix/gaussian.hpp"
#include "wickmix/special.hpp"

namespace wickmix {

/// What to do when det(Delta) is not 1 within 1e-8.
enum class DeterminantPolicy { strict, warn };

/// Generalized hyperbolic vector X = mu + s Delta beta + sqrt(s) Delta^(1/2) zeta,
/// with s ~ GIG(psi, chi, lambda) and zeta standard normal.
///
/// Delta must be symmetric positive definite. Its determinant is 1 by
/// convention; under `warn` a violation is recorded in warnings() instead of
/// rejected, since the moment formula never uses it.
class HyperbolicModel {
 public:
  static constexpr double kDeterminantTolerance = 1e-8;

  HyperbolicModel(Eigen::VectorXd mu, Eigen::VectorXd beta, Eigen::MatrixXd delta, GIGParams gig,
                  DeterminantPolicy policy = DeterminantPolicy::strict);

  [[nodiscard]] const Eigen::VectorXd& mu() const noexcept { return mu_; }
  [[nodiscard]] const Eigen::VectorXd& beta() const noexcept { return beta_; }
  [[nodiscard]] const CovarianceMatrix& delta() const noexcept { return delta_; }
  [[nodiscard]] const GIGParams& gig() const noexcept { return gig_; }
  /// gamma = Delta beta.
  [[nodiscard]] Eigen::VectorXd gamma() const { return delta_.matrix() * beta_; }
  [[nodiscard]] int dimension() const noexcept { return delta_.dimension(); }
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::VectorXd beta_;
  CovarianceMatrix delta_;
  GIGParams gig_;
  std::vector<std::string> warnings_;
};

/// Highest GIG moment order consumed by hyperbolic_moment for an index of
/// this size. The exponent N + l - p + eps peaks at l = N, p = 0, so every
/// order 0 .. |A| is needed.
int gig_orders_needed(const MultiIndex& index);

/// E[X_A] for the generalized hyperbolic vector:
///
///   sum over l = 0..N, S subset of A with |S| = 2l + eps, T subset of S of
///   mu_T * gamma_{S\T} * m_{N+l-|T|+eps} * Wick(A \ S; Delta).
///
/// Subsets are taken over positions. term_count counts (S, T) pairs.
MomentResult hyperbolic_moment_counted(const HyperbolicModel& model, const MultiIndex& index,
                                       const WickOptions& options = {});
double hyperbolic_moment(const HyperbolicModel& model, const MultiIndex& index,
                         const WickOptions& options = {});

/// The same quadruple sum with caller-supplied scale moments m_0..m_|A|
/// (m[l] standing for E[s^l]). With m[l] = s0^l this is the moment of the
/// Gaussian vector obtained by freezing the scale at s0.
MomentResult hyperbolic_moment_given_scale_moments(const Eigen::VectorXd& mu,
                                                   const Eigen::VectorXd& gamma,
                                                   const CovarianceMatrix& delta,
                                                   const MultiIndex& index,
                                                   std::span<const double> scale_moments,
                                                   const WickOptions& options = {});

}  // namespace wickmix
