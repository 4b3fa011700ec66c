#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wickmix/sampling.hpp"

namespace wickmix {

/// Outcome of comparing a closed-form moment with a Monte Carlo estimate.
///
/// The assertion is |exact - mc| <= 5 SE. When the exact value is nonzero and
/// SE / |exact| > 0.5 the estimate cannot resolve the value and the result is
/// `inconclusive` instead. Under normality a single 5 SE check fails by
/// chance with probability about 5.7e-7.
struct Agreement {
  enum class Status { pass, fail, inconclusive };

  static constexpr double kBand = 5.0;
  static constexpr double kMaxRelativeError = 0.5;

  Status status = Status::pass;
  double z = 0.0;
  double relative_se = 0.0;
};

Agreement compare_with_estimate(double exact, const MomentEstimate& estimate);
const char* to_string(Agreement::Status status);

/// One model of the standard Monte Carlo grid with the monomials checked on it.
struct VerificationCase {
  std::string family;  // "gaussian", "location_mixture" or "hyperbolic"
  std::string name;
  Sampler sampler;
  std::vector<MultiIndex> indices;
  std::function<double(const MultiIndex&)> exact;
};

/// Every multiset of components of size 1..max_size in dimension d, sorted.
std::vector<MultiIndex> all_multisets(int dimension, std::size_t max_size);

/// Fixed models with d <= 3, each checked on all monomials with |A| <= 5.
std::vector<VerificationCase> standard_grid();

/// Random symmetric PSD matrix (scaled Gram matrix of Gaussian columns).
Eigen::MatrixXd random_covariance(int dimension, Rng& rng);

/// Random index of the given size over components 1..dimension.
MultiIndex random_index(int dimension, std::size_t size, Rng& rng);

/// psi, chi in {0.5, 1, 2, 5} crossed with lambda in {-2, -0.5, 0, 0.5, 3}.
std::vector<GIGParams> gig_parameter_grid();

}  // namespace wickmix
