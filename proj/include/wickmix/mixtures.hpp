#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <mutex>
#include <variant>
#include <vector>

#include "wickmix/combinatorics.hpp"
#include "wickmix/gaussian.hpp"

namespace wickmix {

/// Law of the random location mu in X = mu + zeta. Only mixed moments
/// E[mu_S] are ever needed, so no density is assumed.
namespace mixing {

/// Point mass at `location`.
struct Deterministic {
  Eigen::VectorXd location;
};

/// eps * mu with Pr{eps = 1} = Pr{eps = -1} = 1/2.
struct Bernoulli {
  Eigen::VectorXd mu;
};

/// Finitely many atoms. Probabilities must be positive and sum to 1 within 1e-12.
struct DiscreteAtoms {
  struct Atom {
    Eigen::VectorXd location;
    double probability;
  };
  std::vector<Atom> atoms;
};

/// User-supplied mixed moments S -> E[mu_S]. The callback is trusted to
/// return finite values and is called under a lock, so it need not be
/// reentrant.
struct MomentOracle {
  int dimension = 0;
  std::function<double(const MultiIndex&)> moment;
  std::shared_ptr<std::mutex> guard = std::make_shared<std::mutex>();
};

}  // namespace mixing

using MixingDistribution = std::variant<mixing::Deterministic, mixing::Bernoulli,
                                        mixing::DiscreteAtoms, mixing::MomentOracle>;

/// Throws ContractViolation on empty/mismatched vectors or bad atom weights.
void validate_mixing(const MixingDistribution& mix);
int mixing_dimension(const MixingDistribution& mix);

/// Probability mixture w * a + (1 - w) * b of two atomic laws (deterministic,
/// Bernoulli and atom variants are all expressible as atoms).
MixingDistribution blend_mixing(const MixingDistribution& a, const MixingDistribution& b,
                                double weight_a);

/// Atom representation of a sampleable mixing law; throws
/// UnsupportedSampling for a MomentOracle.
mixing::DiscreteAtoms as_atoms(const MixingDistribution& mix);

/// X = mu + zeta with zeta ~ N(0, noise_cov) independent of mu.
class LocationMixtureModel {
 public:
  LocationMixtureModel(MixingDistribution mixing, CovarianceMatrix noise_cov);

  [[nodiscard]] const MixingDistribution& mixing() const noexcept { return mixing_; }
  [[nodiscard]] const CovarianceMatrix& noise_cov() const noexcept { return noise_cov_; }
  [[nodiscard]] int dimension() const noexcept { return noise_cov_.dimension(); }

 private:
  MixingDistribution mixing_;
  CovarianceMatrix noise_cov_;
};

/// E[mu_S] for the components listed in `sub`. Empty `sub` gives 1.
double mixing_moment(const MixingDistribution& mix, const MultiIndex& sub);

/// E[X_A] as a double sum over k and position subsets S with |S| = 2k + eps
/// of E[mu_S] times the Wick moment of A \ S. Subsets of the wrong parity are
/// never enumerated. Wick values are shared across the sum by multiset key.
/// term_count is the number of subsets S folded.
MomentResult location_mixture_moment_counted(const LocationMixtureModel& model,
                                             const MultiIndex& index,
                                             const WickOptions& options = {});
double location_mixture_moment(const LocationMixtureModel& model, const MultiIndex& index,
                               const WickOptions& options = {});

/// Simplified form for distinct entries and independent mixing components:
/// E[mu_S] is replaced by the product of the component means. Independence
/// is the caller's promise; distinctness is checked (ContractViolation).
double location_mixture_moment_independent(const LocationMixtureModel& model,
                                           const MultiIndex& index,
                                           const WickOptions& options = {});

}  // namespace wickmix
