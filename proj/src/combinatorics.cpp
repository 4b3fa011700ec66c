#include "wickmix/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wickmix/errors.hpp"

namespace wickmix {

MultiIndex::MultiIndex(std::vector<int> entries, int dimension)
    : entries_(std::move(entries)), dimension_(dimension) {
  if (dimension_ < 1 && !entries_.empty()) {
    throw ContractViolation("multi-index dimension must be >= 1");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > dimension_) {
      throw ContractViolation("multi-index entry " + std::to_string(entries_[i]) + " at position " +
                              std::to_string(i + 1) + " outside [1, " +
                              std::to_string(dimension_) + "]");
    }
  }
}

MultiIndex MultiIndex::sorted() const {
  MultiIndex out = *this;
  std::sort(out.entries_.begin(), out.entries_.end());
  return out;
}

MultiIndex MultiIndex::select(std::span<const std::size_t> positions) const {
  MultiIndex out;
  out.dimension_ = dimension_;
  out.entries_.reserve(positions.size());
  for (auto p : positions) out.entries_.push_back(entries_.at(p));
  return out;
}

bool MultiIndex::has_distinct_entries() const {
  auto s = entries_;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

// ---------------------------------------------------------------------------

PairingEnumerator::PairingEnumerator(std::vector<std::size_t> positions)
    : positions_(std::move(positions)), used_(positions_.size(), false) {
  std::sort(positions_.begin(), positions_.end());
  slots_.reserve(positions_.size() / 2);
}

void PairingEnumerator::complete_from_lowest_free() {
  const std::size_t n = positions_.size();
  std::size_t first = 0;
  while (true) {
    while (first < n && used_[first]) ++first;
    if (first == n) return;
    std::size_t second = first + 1;
    while (used_[second]) ++second;
    used_[first] = used_[second] = true;
    slots_.emplace_back(first, second);
  }
}

bool PairingEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    if (empty_domain()) {
      done_ = true;
      return false;
    }
    complete_from_lowest_free();
    return true;
  }
  const std::size_t n = positions_.size();
  while (!slots_.empty()) {
    auto [first, second] = slots_.back();
    slots_.pop_back();
    used_[first] = used_[second] = false;
    for (std::size_t k = second + 1; k < n; ++k) {
      if (!used_[k]) {
        used_[first] = used_[k] = true;
        slots_.emplace_back(first, k);
        complete_from_lowest_free();
        return true;
      }
    }
  }
  done_ = true;
  return false;
}

Pairing PairingEnumerator::current() const {
  Pairing out;
  out.pairs.reserve(slots_.size());
  for (auto [a, b] : slots_) out.pairs.emplace_back(positions_[a], positions_[b]);
  return out;
}

// ---------------------------------------------------------------------------

SubsetEnumerator::SubsetEnumerator(std::vector<std::size_t> universe, std::size_t k)
    : universe_(std::move(universe)), k_(k) {
  std::sort(universe_.begin(), universe_.end());
}

SubsetEnumerator::SubsetEnumerator(std::size_t n, std::size_t k)
    : SubsetEnumerator(all_positions(n), k) {}

bool SubsetEnumerator::next() {
  if (done_) return false;
  const std::size_t n = universe_.size();
  if (!started_) {
    started_ = true;
    if (k_ > n) {
      done_ = true;
      return false;
    }
    choice_.resize(k_);
    std::iota(choice_.begin(), choice_.end(), std::size_t{0});
    return true;
  }
  // Rightmost slot that can still move right.
  std::size_t i = k_;
  while (i > 0 && choice_[i - 1] == n - k_ + (i - 1)) --i;
  if (i == 0) {
    done_ = true;
    return false;
  }
  ++choice_[i - 1];
  for (std::size_t j = i; j < k_; ++j) choice_[j] = choice_[j - 1] + 1;
  return true;
}

SubsetSelection SubsetEnumerator::current() const {
  SubsetSelection out;
  out.positions.reserve(choice_.size());
  out.complement.reserve(universe_.size() - choice_.size());
  std::size_t c = 0;
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    if (c < choice_.size() && choice_[c] == i) {
      out.positions.push_back(universe_[i]);
      ++c;
    } else {
      out.complement.push_back(universe_[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> all_positions(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

void for_each_pairing(std::span<const std::size_t> positions,
                      const std::function<void(const Pairing&)>& visit) {
  PairingEnumerator e({positions.begin(), positions.end()});
  while (e.next()) visit(e.current());
}

void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const SubsetSelection&)>& visit) {
  SubsetEnumerator e(n, k);
  while (e.next()) visit(e.current());
}

MultisetKey canonical_key(const MultiIndex& index, std::span<const std::size_t> positions) {
  MultisetKey key;
  key.reserve(positions.size());
  for (auto p : positions) key.push_back(index[p]);
  std::sort(key.begin(), key.end());
  return key;
}

std::size_t MultisetKeyHash::operator()(const MultisetKey& key) const noexcept {
  // FNV-1a over the entries.
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : key) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::uint64_t pairing_count(std::size_t set_size) {
  if (set_size % 2 != 0) return 0;
  if (set_size > 34) throw ContractViolation("pairing_count: exact range is set_size <= 34");
  std::uint64_t out = 1;
  for (std::uint64_t odd = 1; odd + 1 <= set_size; odd += 2) out *= odd;
  return out;
}

double pairing_count_estimate(std::size_t set_size) {
  if (set_size % 2 != 0) return 0.0;
  double out = 1.0;
  for (std::size_t odd = 1; odd + 1 <= set_size; odd += 2) out *= static_cast<double>(odd);
  return out;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i is C(n - k + i, i), always integral.
    const unsigned __int128 wide = static_cast<unsigned __int128>(out) * (n - k + i);
    out = static_cast<std::uint64_t>(wide / i);
  }
  return out;
}

}  // namespace wickmix
