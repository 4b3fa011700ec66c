#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "wickmix/combinatorics.hpp"

namespace wickmix {

enum class PsdCheck { validate, skip };

/// Symmetric positive semidefinite d x d covariance matrix.
///
/// Symmetry is checked exactly as stored. Positive semidefiniteness is
/// checked up to a relative tolerance: the smallest eigenvalue must be at
/// least -1e-10 times the spectral norm. `PsdCheck::skip` bypasses the
/// eigenvalue test (symmetry is always enforced).
class CovarianceMatrix {
 public:
  static constexpr double kPsdTolerance = 1e-10;

  explicit CovarianceMatrix(Eigen::MatrixXd entries, PsdCheck check = PsdCheck::validate);

  /// Covariance between components `a` and `b`, both 1-based.
  [[nodiscard]] double between(int a, int b) const { return entries_(a - 1, b - 1); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  [[nodiscard]] int dimension() const noexcept { return static_cast<int>(entries_.rows()); }

  [[nodiscard]] CovarianceMatrix scaled(double factor) const;

  friend bool operator==(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

  /// Test hook: builds a matrix without any validation, so that downstream
  /// checks can be exercised against a corrupted input.
  static CovarianceMatrix unchecked(Eigen::MatrixXd entries);

 private:
  struct Unchecked {};
  CovarianceMatrix(Eigen::MatrixXd entries, Unchecked) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;
};

/// Throws ContractViolation if `m` is not symmetric or not PSD within tolerance.
void validate_covariance(const Eigen::MatrixXd& m, PsdCheck check = PsdCheck::validate);

enum class Summation { plain, compensated };

struct WickOptions {
  Summation summation = Summation::plain;
};

/// Value of a moment together with the number of summands that were folded.
struct MomentResult {
  double value = 0.0;
  std::uint64_t term_count = 0;
};

/// Isserlis/Wick moment E[X_A] of a zero-mean Gaussian vector with covariance R.
///
/// Sums, over every pairing of the positions of A, the product of the paired
/// covariances. Odd |A| gives exactly 0 and the empty index gives 1. The
/// entries of A are put in canonical (sorted) order before enumeration, so
/// the floating-point result is identical for every ordering of A.
double wick_moment(const MultiIndex& index, const CovarianceMatrix& cov,
                   const WickOptions& options = {});

/// As wick_moment, also reporting the number of pairings folded.
MomentResult wick_moment_counted(const MultiIndex& index, const CovarianceMatrix& cov,
                                 const WickOptions& options = {});

/// Memo table of Wick moments for one covariance matrix, keyed by the sorted
/// multiset of component indices. Safe to share between threads.
class WickCache {
 public:
  explicit WickCache(CovarianceMatrix cov, WickOptions options = {}, bool enabled = true);

  /// Wick moment of the components selected by `positions` within `parent`.
  double moment(const MultiIndex& parent, std::span<const std::size_t> positions);
  double moment(const MultiIndex& index);

  [[nodiscard]] const CovarianceMatrix& covariance() const noexcept { return cov_; }
  [[nodiscard]] std::size_t hits() const;
  [[nodiscard]] std::size_t misses() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool enabled() const noexcept { return enabled_; }

 private:
  double evaluate(const MultisetKey& key);

  CovarianceMatrix cov_;
  WickOptions options_;
  bool enabled_;
  mutable std::mutex mutex_;
  std::unordered_map<MultisetKey, double, MultisetKeyHash> table_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// wick_moment routed through `cache`; the cache must have been built for
/// the same covariance matrix.
double wick_moment_memoized(const MultiIndex& index, const CovarianceMatrix& cov, WickCache& cache);

}  // namespace wickmix
