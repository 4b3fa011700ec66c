#include "wickmix/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wickmix/errors.hpp"

namespace wickmix {

void validate_covariance(const Eigen::MatrixXd& m, PsdCheck check) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ContractViolation("covariance must be a non-empty square matrix");
  }
  if (!m.allFinite()) throw ContractViolation("covariance has non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) {
        throw ContractViolation("covariance is not symmetric at (" + std::to_string(i + 1) + ", " +
                                std::to_string(j + 1) + ")");
      }
    }
  }
  if (check == PsdCheck::skip) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  const double norm = values.cwiseAbs().maxCoeff();
  if (values.minCoeff() < -CovarianceMatrix::kPsdTolerance * norm) {
    throw ContractViolation("covariance is not positive semidefinite (smallest eigenvalue " +
                            std::to_string(values.minCoeff()) + ")");
  }
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries, PsdCheck check)
    : entries_(std::move(entries)) {
  validate_covariance(entries_, check);
}

CovarianceMatrix CovarianceMatrix::unchecked(Eigen::MatrixXd entries) {
  return CovarianceMatrix(std::move(entries), Unchecked{});
}

CovarianceMatrix CovarianceMatrix::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ContractViolation("covariance scale factor must be >= 0");
  return CovarianceMatrix(entries_ * factor, Unchecked{});
}

namespace {

class Accumulator {
 public:
  explicit Accumulator(Summation mode) : mode_(mode) {}

  void add(double x) {
    if (mode_ == Summation::plain) {
      sum_ += x;
      return;
    }
    // Neumaier's variant of Kahan summation.
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  Summation mode_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Depth-first walk in PairingEnumerator order: lowest free slot pairs with
// each later free slot, ascending. `prefix` is the running left-to-right
// product over the pairs chosen so far.
struct WickFold {
  const std::vector<int>& entries;
  const CovarianceMatrix& cov;
  std::vector<bool> used;
  Accumulator acc;
  std::uint64_t terms = 0;

  void walk(double prefix, std::size_t remaining) {
    if (remaining == 0) {
      acc.add(prefix);
      ++terms;
      return;
    }
    const std::size_t n = entries.size();
    std::size_t first = 0;
    while (used[first]) ++first;
    used[first] = true;
    for (std::size_t second = first + 1; second < n; ++second) {
      if (used[second]) continue;
      used[second] = true;
      walk(prefix * cov.between(entries[first], entries[second]), remaining - 2);
      used[second] = false;
    }
    used[first] = false;
  }
};

void check_dimensions(const MultiIndex& index, const CovarianceMatrix& cov) {
  if (!index.empty() && index.dimension() != cov.dimension()) {
    throw ContractViolation("multi-index dimension " + std::to_string(index.dimension()) +
                            " does not match covariance dimension " +
                            std::to_string(cov.dimension()));
  }
}

MomentResult wick_on_sorted(const std::vector<int>& entries, const CovarianceMatrix& cov,
                            const WickOptions& options) {
  if (entries.size() % 2 != 0) return {0.0, 0};
  WickFold fold{entries, cov, std::vector<bool>(entries.size(), false),
                Accumulator(options.summation)};
  fold.walk(1.0, entries.size());
  return {fold.acc.value(), fold.terms};
}

}  // namespace

MomentResult wick_moment_counted(const MultiIndex& index, const CovarianceMatrix& cov,
                                 const WickOptions& options) {
  check_dimensions(index, cov);
  std::vector<int> entries(index.entries().begin(), index.entries().end());
  std::sort(entries.begin(), entries.end());
  return wick_on_sorted(entries, cov, options);
}

double wick_moment(const MultiIndex& index, const CovarianceMatrix& cov,
                   const WickOptions& options) {
  return wick_moment_counted(index, cov, options).value;
}

// ---------------------------------------------------------------------------

WickCache::WickCache(CovarianceMatrix cov, WickOptions options, bool enabled)
    : cov_(std::move(cov)), options_(options), enabled_(enabled) {}

double WickCache::evaluate(const MultisetKey& key) {
  if (key.size() % 2 != 0) return 0.0;
  if (!enabled_) return wick_on_sorted(key, cov_, options_).value;
  {
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const double value = wick_on_sorted(key, cov_, options_).value;
  std::lock_guard lock(mutex_);
  auto [it, inserted] = table_.emplace(key, value);
  if (inserted) {
    ++misses_;
  } else {
    ++hits_;
  }
  return it->second;
}

double WickCache::moment(const MultiIndex& parent, std::span<const std::size_t> positions) {
  check_dimensions(parent, cov_);
  return evaluate(canonical_key(parent, positions));
}

double WickCache::moment(const MultiIndex& index) {
  check_dimensions(index, cov_);
  MultisetKey key(index.entries().begin(), index.entries().end());
  std::sort(key.begin(), key.end());
  return evaluate(key);
}

std::size_t WickCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t WickCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

std::size_t WickCache::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

double wick_moment_memoized(const MultiIndex& index, const CovarianceMatrix& cov,
                            WickCache& cache) {
  if (!(cache.covariance() == cov)) {
    throw ContractViolation("WickCache was built for a different covariance matrix");
  }
  return cache.moment(index);
}

}  // namespace wickmix
