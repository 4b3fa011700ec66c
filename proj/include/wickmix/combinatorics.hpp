#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace wickmix {

/// Index multiset A = (a_1, ..., a_n) over the components 1..d of a random
/// vector. Entries are 1-based and kept in the order given; repetitions are
/// allowed. The empty index is valid and stands for the constant monomial 1.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::vector<int> entries, int dimension);

  [[nodiscard]] std::span<const int> entries() const noexcept { return entries_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] int operator[](std::size_t position) const { return entries_[position]; }

  /// N in |A| = 2N + parity.
  [[nodiscard]] std::size_t half_size() const noexcept { return entries_.size() / 2; }
  /// 0 for even |A|, 1 for odd |A|.
  [[nodiscard]] std::size_t parity() const noexcept { return entries_.size() % 2; }

  [[nodiscard]] MultiIndex sorted() const;
  [[nodiscard]] MultiIndex select(std::span<const std::size_t> positions) const;
  [[nodiscard]] bool has_distinct_entries() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int dimension_ = 0;
};

/// Perfect matching of a position set, as (first, second) pairs with
/// first < second, listed by increasing first element.
struct Pairing {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  friend bool operator==(const Pairing&, const Pairing&) = default;
};

/// Selected positions S of a multi-index together with the complement.
/// Both lists are ascending.
struct SubsetSelection {
  std::vector<std::size_t> positions;
  std::vector<std::size_t> complement;
};

/// Streams every perfect matching of a position set exactly once.
///
/// Order is deterministic: the lowest free position is paired with each later
/// free position in ascending order, depth first. Memory is O(n). An odd
/// position set has no pairings and the stream is empty from the start; an
/// empty set yields exactly one empty pairing.
class PairingEnumerator {
 public:
  explicit PairingEnumerator(std::vector<std::size_t> positions);

  /// Advances to the next pairing; false once the stream is exhausted.
  bool next();
  [[nodiscard]] Pairing current() const;
  [[nodiscard]] bool empty_domain() const noexcept { return positions_.size() % 2 != 0; }

 private:
  void complete_from_lowest_free();

  std::vector<std::size_t> positions_;
  std::vector<std::pair<std::size_t, std::size_t>> slots_;  // indices into positions_
  std::vector<bool> used_;
  bool started_ = false;
  bool done_ = false;
};

/// Streams all C(n, k) size-k subsets of a position set, lexicographic order.
/// k > n gives an empty stream.
class SubsetEnumerator {
 public:
  SubsetEnumerator(std::vector<std::size_t> universe, std::size_t k);
  /// Subsets of {0, ..., n-1}.
  SubsetEnumerator(std::size_t n, std::size_t k);

  bool next();
  [[nodiscard]] SubsetSelection current() const;
  /// Cheaper accessors for hot loops.
  [[nodiscard]] std::span<const std::size_t> chosen_slots() const noexcept { return choice_; }
  [[nodiscard]] std::span<const std::size_t> universe() const noexcept { return universe_; }

 private:
  std::vector<std::size_t> universe_;
  std::vector<std::size_t> choice_;  // indices into universe_
  std::size_t k_;
  bool started_ = false;
  bool done_ = false;
};

/// Positions 0..n-1.
std::vector<std::size_t> all_positions(std::size_t n);

/// Visits every pairing of `positions` in enumeration order.
void for_each_pairing(std::span<const std::size_t> positions,
                      const std::function<void(const Pairing&)>& visit);

/// Visits every size-k subset of {0..n-1} with its complement.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const SubsetSelection&)>& visit);

/// Sorted component values picked out by `positions`; two selections share a
/// key iff they induce the same multiset of components.
using MultisetKey = std::vector<int>;
MultisetKey canonical_key(const MultiIndex& index, std::span<const std::size_t> positions);

struct MultisetKeyHash {
  std::size_t operator()(const MultisetKey& key) const noexcept;
};

/// (2N-1)!! for a set of size 2N, i.e. the number of perfect matchings.
/// Returns 0 for odd sizes and 1 for the empty set. Exact up to 2N = 34 (33!! is the last value
/// that fits in 64 bits); larger sizes throw ContractViolation.
std::uint64_t pairing_count(std::size_t set_size);

/// Floating estimate of (2N-1)!!, usable beyond the exact range.
double pairing_count_estimate(std::size_t set_size);

/// Binomial coefficient C(n, k), exact while it fits in 64 bits.
std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace wickmix
