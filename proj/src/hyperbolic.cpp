#include "wickmix/hyperbolic.hpp"

#include <cmath>
#include <string>

#include "wickmix/errors.hpp"

namespace wickmix {

namespace {

CovarianceMatrix checked_delta(const Eigen::MatrixXd& delta) {
  CovarianceMatrix out(delta);
  Eigen::LLT<Eigen::MatrixXd> llt(delta);
  if (llt.info() != Eigen::Success) {
    throw ContractViolation("Delta must be positive definite");
  }
  return out;
}

}  // namespace

HyperbolicModel::HyperbolicModel(Eigen::VectorXd mu, Eigen::VectorXd beta, Eigen::MatrixXd delta,
                                 GIGParams gig, DeterminantPolicy policy)
    : mu_(std::move(mu)), beta_(std::move(beta)), delta_(checked_delta(delta)), gig_(gig) {
  const int d = delta_.dimension();
  if (mu_.size() != d || beta_.size() != d) {
    throw ContractViolation("mu and beta must have the dimension of Delta (" + std::to_string(d) +
                            ")");
  }
  if (!mu_.allFinite() || !beta_.allFinite()) {
    throw ContractViolation("mu and beta must be finite");
  }
  const double det = delta_.matrix().determinant();
  if (std::abs(det - 1.0) > kDeterminantTolerance) {
    const std::string message =
        "determinant check: det(Delta) = " + std::to_string(det) + ", expected 1";
    if (policy == DeterminantPolicy::strict) throw ContractViolation(message);
    warnings_.push_back(message);
  }
}

int gig_orders_needed(const MultiIndex& index) { return static_cast<int>(index.size()); }

MomentResult hyperbolic_moment_given_scale_moments(const Eigen::VectorXd& mu,
                                                   const Eigen::VectorXd& gamma,
                                                   const CovarianceMatrix& delta,
                                                   const MultiIndex& index,
                                                   std::span<const double> scale_moments,
                                                   const WickOptions& options) {
  const int d = delta.dimension();
  if (mu.size() != d || gamma.size() != d) {
    throw ContractViolation("mu and gamma must have the dimension of Delta");
  }
  if (!index.empty() && index.dimension() != d) {
    throw ContractViolation("multi-index dimension " + std::to_string(index.dimension()) +
                            " does not match model dimension " + std::to_string(d));
  }
  if (scale_moments.size() < index.size() + 1) {
    throw ContractViolation("need scale moments up to order " + std::to_string(index.size()));
  }

  const std::size_t n = index.size();
  const std::size_t half = index.half_size();
  const std::size_t parity = index.parity();
  WickCache wick(delta, options);
  MomentResult out;

  for (std::size_t l = 0; l <= half; ++l) {
    SubsetEnumerator outer(n, 2 * l + parity);
    while (outer.next()) {
      const SubsetSelection s = outer.current();
      const double gaussian_part = wick.moment(index, s.complement);
      for (std::size_t p = 0; p <= s.positions.size(); ++p) {
        SubsetEnumerator inner(s.positions, p);
        while (inner.next()) {
          ++out.term_count;
          if (gaussian_part == 0.0) continue;
          const SubsetSelection t = inner.current();
          double location = 1.0;
          for (auto pos : t.positions) location *= mu(index[pos] - 1);
          for (auto pos : t.complement) location *= gamma(index[pos] - 1);
          if (location == 0.0) continue;
          out.value += location * scale_moments[half + l - p + parity] * gaussian_part;
        }
      }
    }
  }
  return out;
}

MomentResult hyperbolic_moment_counted(const HyperbolicModel& model, const MultiIndex& index,
                                       const WickOptions& options) {
  const auto m = gig_moments_upto(model.gig(), gig_orders_needed(index));
  return hyperbolic_moment_given_scale_moments(model.mu(), model.gamma(), model.delta(), index, m,
                                               options);
}

double hyperbolic_moment(const HyperbolicModel& model, const MultiIndex& index,
                         const WickOptions& options) {
  return hyperbolic_moment_counted(model, index, options).value;
}

}  // namespace wickmix
