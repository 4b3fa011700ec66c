#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wickmix/combinatorics.hpp"
#include "wickmix/gaussian.hpp"
#include "wickmix/hyperbolic.hpp"
#include "wickmix/mixtures.hpp"
#include "wickmix/special.hpp"

namespace wickmix {

/// Identifies a reproducible random sequence. Distinct stream ids are
/// 2^192 draws apart in the underlying generator.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// xoshiro256** with jump-ahead. Each (seed, stream_id) maps to a fixed
/// position in one long sequence: the seed is expanded with splitmix64 and
/// the state is then long-jumped stream_id times.
class Rng {
 public:
  explicit Rng(RandomStream stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Advance by 2^128 draws.
  void jump();
  /// Advance by 2^192 draws.
  void long_jump();

 private:
  void apply_jump(const std::array<std::uint64_t, 4>& polynomial);

  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Draws X into `out` (already sized to the model dimension).
struct Sampler {
  int dimension = 0;
  std::function<void(Rng&, Eigen::VectorXd& out)> draw;
};

/// Factor F with F F^T = R from a pivoted LDL^T decomposition; negative
/// pivots within the PSD tolerance are clamped to zero. Throws
/// ContractViolation if the reconstruction misses R by more than 1e-8 |R|.
Eigen::MatrixXd psd_factor(const CovarianceMatrix& cov);

Eigen::VectorXd sample_gaussian(const CovarianceMatrix& cov, Rng& rng);
Sampler gaussian_sampler(const CovarianceMatrix& cov);

/// Throws UnsupportedSampling for a moment-oracle mixing law.
Eigen::VectorXd sample_location_mixture(const LocationMixtureModel& model, Rng& rng);
Sampler location_mixture_sampler(const LocationMixtureModel& model);

/// Exact GIG variates by ratio-of-uniforms with the mode shifted to the
/// origin, applied to the standardized law with |lambda| (negative lambda
/// is handled through the reciprocal). The bounding rectangle comes from
/// the extremal points of (y - mode) sqrt(h(y)), the two positive roots of
/// a cubic. Setup fails with SamplerError when the acceptance probability
/// of that rectangle is below 1e-3.
class GigSampler {
 public:
  static constexpr double kMinAcceptance = 1e-3;

  explicit GigSampler(const GIGParams& params);

  double operator()(Rng& rng) const;
  /// Exact acceptance probability of the envelope.
  [[nodiscard]] double acceptance() const noexcept { return acceptance_; }
  [[nodiscard]] const GIGParams& params() const noexcept { return params_; }

 private:
  double log_h(double y) const;

  GIGParams params_;
  double abs_lambda_;
  double omega_;
  double scale_;
  bool invert_;
  double mode_;
  double log_h_mode_;
  double v_minus_;
  double v_plus_;
  double acceptance_;
};

/// One draw; builds the envelope each call. Reuse a GigSampler for batches.
double sample_gig(const GIGParams& params, Rng& rng);

Eigen::VectorXd sample_hyperbolic(const HyperbolicModel& model, Rng& rng);
Sampler hyperbolic_sampler(const HyperbolicModel& model);

/// Sample mean of the monomial X_A and its standard error.
struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Draws `n` samples and estimates every monomial in `indices` from the same
/// draws. Samples are produced in fixed blocks, each with its own jumped
/// generator, and block statistics are merged in block order, so the result
/// is bitwise identical for any thread count.
std::vector<MomentEstimate> estimate_moments(const Sampler& sampler,
                                             std::span<const MultiIndex> indices, std::uint64_t n,
                                             RandomStream stream, unsigned threads = 1);

MomentEstimate estimate_moment(const Sampler& sampler, const MultiIndex& index, std::uint64_t n,
                               RandomStream stream, unsigned threads = 1);

/// Two-sided Kolmogorov-Smirnov statistic of ascending samples against the
/// CDF values at those samples.
double ks_statistic(std::span<const double> sorted_samples, std::span<const double> cdf_values);

/// Asymptotic P(D_n >= d) with the Stephens small-sample correction.
double ks_p_value(double statistic, std::uint64_t n);

}  // namespace wickmix
