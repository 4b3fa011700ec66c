#include "wickmix/mixtures.hpp"

#include <cmath>
#include <string>

#include "wickmix/errors.hpp"

namespace wickmix {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

double monomial(const Eigen::VectorXd& v, const MultiIndex& sub) {
  double out = 1.0;
  for (int a : sub.entries()) out *= v(a - 1);
  return out;
}

}  // namespace

int mixing_dimension(const MixingDistribution& mix) {
  return std::visit(
      overloaded{
          [](const mixing::Deterministic& m) { return static_cast<int>(m.location.size()); },
          [](const mixing::Bernoulli& m) { return static_cast<int>(m.mu.size()); },
          [](const mixing::DiscreteAtoms& m) {
            return m.atoms.empty() ? 0 : static_cast<int>(m.atoms.front().location.size());
          },
          [](const mixing::MomentOracle& m) { return m.dimension; },
      },
      mix);
}

void validate_mixing(const MixingDistribution& mix) {
  const int d = mixing_dimension(mix);
  if (d < 1) throw ContractViolation("mixing distribution has dimension 0");
  if (const auto* atoms = std::get_if<mixing::DiscreteAtoms>(&mix)) {
    double total = 0.0;
    for (std::size_t i = 0; i < atoms->atoms.size(); ++i) {
      const auto& atom = atoms->atoms[i];
      if (atom.location.size() != d) {
        throw ContractViolation("atom " + std::to_string(i + 1) + " has dimension " +
                                std::to_string(atom.location.size()) + ", expected " +
                                std::to_string(d));
      }
      if (!(atom.probability > 0.0)) {
        throw ContractViolation("atom " + std::to_string(i + 1) + " has non-positive probability");
      }
      if (!atom.location.allFinite()) {
        throw ContractViolation("atom " + std::to_string(i + 1) + " has non-finite location");
      }
      total += atom.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ContractViolation("atom probabilities sum to " + std::to_string(total) + ", not 1");
    }
  }
  if (const auto* oracle = std::get_if<mixing::MomentOracle>(&mix); oracle && !oracle->moment) {
    throw ContractViolation("moment oracle has no callback");
  }
}

mixing::DiscreteAtoms as_atoms(const MixingDistribution& mix) {
  return std::visit(
      overloaded{
          [](const mixing::Deterministic& m) {
            return mixing::DiscreteAtoms{{{m.location, 1.0}}};
          },
          [](const mixing::Bernoulli& m) {
            return mixing::DiscreteAtoms{{{m.mu, 0.5}, {-m.mu, 0.5}}};
          },
          [](const mixing::DiscreteAtoms& m) { return m; },
          [](const mixing::MomentOracle&) -> mixing::DiscreteAtoms {
            throw UnsupportedSampling("a moment-oracle mixing law has no atom representation");
          },
      },
      mix);
}

MixingDistribution blend_mixing(const MixingDistribution& a, const MixingDistribution& b,
                                double weight_a) {
  if (!(weight_a > 0.0 && weight_a < 1.0)) {
    throw ContractViolation("blend weight must lie in (0, 1)");
  }
  mixing::DiscreteAtoms out;
  for (const auto& atom : as_atoms(a).atoms) {
    out.atoms.push_back({atom.location, weight_a * atom.probability});
  }
  for (const auto& atom : as_atoms(b).atoms) {
    out.atoms.push_back({atom.location, (1.0 - weight_a) * atom.probability});
  }
  return out;
}

double mixing_moment(const MixingDistribution& mix, const MultiIndex& sub) {
  if (!sub.empty() && sub.dimension() != mixing_dimension(mix)) {
    throw ContractViolation("index dimension does not match mixing dimension");
  }
  if (sub.empty()) return 1.0;
  return std::visit(
      overloaded{
          [&](const mixing::Deterministic& m) { return monomial(m.location, sub); },
          [&](const mixing::Bernoulli& m) {
            // Odd powers of a symmetric sign vanish, even powers are 1.
            return sub.size() % 2 == 0 ? monomial(m.mu, sub) : 0.0;
          },
          [&](const mixing::DiscreteAtoms& m) {
            double out = 0.0;
            for (const auto& atom : m.atoms) out += atom.probability * monomial(atom.location, sub);
            return out;
          },
          [&](const mixing::MomentOracle& m) {
            std::lock_guard lock(*m.guard);
            return m.moment(sub);
          },
      },
      mix);
}

// ---------------------------------------------------------------------------

LocationMixtureModel::LocationMixtureModel(MixingDistribution mixing, CovarianceMatrix noise_cov)
    : mixing_(std::move(mixing)), noise_cov_(std::move(noise_cov)) {
  validate_mixing(mixing_);
  if (mixing_dimension(mixing_) != noise_cov_.dimension()) {
    throw ContractViolation("mixing dimension " + std::to_string(mixing_dimension(mixing_)) +
                            " does not match noise covariance dimension " +
                            std::to_string(noise_cov_.dimension()));
  }
}

namespace {

void check_index(const LocationMixtureModel& model, const MultiIndex& index) {
  if (!index.empty() && index.dimension() != model.dimension()) {
    throw ContractViolation("multi-index dimension " + std::to_string(index.dimension()) +
                            " does not match model dimension " +
                            std::to_string(model.dimension()));
  }
}

// Shared double sum; `location_factor` supplies the mu-part for a subset.
template <class LocationFactor>
MomentResult fold_location_sum(const LocationMixtureModel& model, const MultiIndex& index,
                               const WickOptions& options, LocationFactor&& location_factor) {
  check_index(model, index);
  WickCache wick(model.noise_cov(), options);
  const std::size_t n = index.size();
  const std::size_t parity = index.parity();
  MomentResult out;
  for (std::size_t k = 0; 2 * k + parity <= n; ++k) {
    SubsetEnumerator subsets(n, 2 * k + parity);
    while (subsets.next()) {
      const SubsetSelection s = subsets.current();
      ++out.term_count;
      const double mu_part = location_factor(index.select(s.positions));
      if (mu_part == 0.0) continue;
      out.value += mu_part * wick.moment(index, s.complement);
    }
  }
  return out;
}

}  // namespace

MomentResult location_mixture_moment_counted(const LocationMixtureModel& model,
                                             const MultiIndex& index,
                                             const WickOptions& options) {
  return fold_location_sum(model, index, options, [&](const MultiIndex& sub) {
    return mixing_moment(model.mixing(), sub);
  });
}

double location_mixture_moment(const LocationMixtureModel& model, const MultiIndex& index,
                               const WickOptions& options) {
  return location_mixture_moment_counted(model, index, options).value;
}

double location_mixture_moment_independent(const LocationMixtureModel& model,
                                           const MultiIndex& index, const WickOptions& options) {
  if (!index.has_distinct_entries()) {
    throw ContractViolation("independent-component formula needs distinct index entries");
  }
  check_index(model, index);
  const int d = model.dimension();
  Eigen::VectorXd mean(d);
  for (int a = 1; a <= d; ++a) mean(a - 1) = mixing_moment(model.mixing(), MultiIndex({a}, d));
  return fold_location_sum(model, index, options, [&](const MultiIndex& sub) {
           return monomial(mean, sub);
         }).value;
}

}  // namespace wickmix
