#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "fauxpas/errors.hpp"

namespace fauxpas {

/// Absolute tolerance for probability-mass bookkeeping checks.
inline constexpr double kMassTolerance = 1e-9;

/// Finite discrete probability distribution over totally ordered elements.
///
/// Invariants, enforced by the factories:
///   - support is sorted by element and free of duplicates,
///   - every retained mass is strictly positive,
///   - masses sum to 1 (normalization happens inside the factory).
///
/// The sorted support makes every downstream computation order-independent:
/// two distributions built from the same weights in any order compare equal.
/// A default-constructed Dist is empty, meaning "not yet assigned"; every
/// populated instance comes from a factory and satisfies the invariants.
template <typename T>
class Dist {
 public:
  using Entry = std::pair<T, double>;

  Dist() = default;

  /// Builds a distribution from (element, weight) pairs. Duplicate elements
  /// are merged by summing, zero weights are dropped, the rest is normalized.
  /// Negative weights raise SpecError; all-zero weight raises ZeroPosteriorError.
  static Dist from_weights(std::vector<Entry> weighted) {
    for (const auto& [elem, w] : weighted) {
      (void)elem;
      if (w < 0.0) throw SpecError("negative probability weight");
    }
    std::sort(weighted.begin(), weighted.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    for (auto& e : weighted) {
      if (!merged.empty() && !(merged.back().first < e.first) && !(e.first < merged.back().first)) {
        merged.back().second += e.second;
      } else {
        merged.push_back(std::move(e));
      }
    }
    double total = 0.0;
    for (const auto& e : merged) total += e.second;
    if (total <= 0.0) throw ZeroPosteriorError("all weights are zero");
    std::vector<Entry> support;
    support.reserve(merged.size());
    for (auto& e : merged) {
      if (e.second > 0.0) support.emplace_back(std::move(e.first), e.second / total);
    }
    return Dist(std::move(support));
  }

  /// Point mass.
  static Dist point(T elem) { return Dist({{std::move(elem), 1.0}}); }

  const std::vector<Entry>& support() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Mass of an element, 0 if outside the support.
  double mass(const T& elem) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), elem,
        [](const Entry& e, const T& v) { return e.first < v; });
    if (it != entries_.end() && !(elem < it->first)) return it->second;
    return 0.0;
  }

  double total_mass() const {
    double total = 0.0;
    for (const auto& e : entries_) total += e.second;
    return total;
  }

  /// Pushforward through fn; colliding images are merged by summing mass.
  template <typename U>
  Dist<U> map(const std::function<U(const T&)>& fn) const {
    std::vector<typename Dist<U>::Entry> weighted;
    weighted.reserve(entries_.size());
    for (const auto& [elem, w] : entries_) weighted.emplace_back(fn(elem), w);
    return Dist<U>::from_weights(std::move(weighted));
  }

  /// Expectation of a real-valued function under the distribution.
  double expectation(const std::function<double(const T&)>& fn) const {
    double acc = 0.0;
    for (const auto& [elem, w] : entries_) acc += w * fn(elem);
    return acc;
  }

  bool operator==(const Dist& other) const { return entries_ == other.entries_; }

 private:
  explicit Dist(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::vector<Entry> entries_;
};

}  // namespace fauxpas
