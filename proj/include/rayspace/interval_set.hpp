#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace rayspace {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, pairwise disjoint closed intervals. Intervals closer than the merge
// tolerance are fused, so the gap between neighbours always exceeds it.
// Set operations work on closures: the complement of [1,2] in [0,3] is
// [0,1] u [2,3].
class IntervalSet {
 public:
  static constexpr double kMergeTol = 1e-9;

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }
  IntervalSet(std::initializer_list<Interval> parts) : parts_(parts) { normalize(); }

  static IntervalSet single(double lo, double hi) { return IntervalSet({Interval{lo, hi}}); }

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }
  const Interval& operator[](std::size_t i) const { return parts_[i]; }

  double measure() const {
    double m = 0.0;
    for (const auto& iv : parts_) m += iv.width();
    return m;
  }

  bool contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
  }

  // Distance from x to the nearest interval endpoint (infinity when empty).
  double distance_to_boundary(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : parts_) {
      best = std::min({best, std::abs(x - iv.lo), std::abs(x - iv.hi)});
    }
    return best;
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
      const double lo = std::max(parts_[i].lo, other.parts_[j].lo);
      const double hi = std::min(parts_[i].hi, other.parts_[j].hi);
      if (hi >= lo) out.push_back({lo, hi});
      if (parts_[i].hi < other.parts_[j].hi) {
        ++i;
      } else {
        ++j;
      }
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet complement_in(const Interval& domain) const {
    std::vector<Interval> out;
    double cursor = domain.lo;
    for (const auto& iv : parts_) {
      if (iv.hi < domain.lo) continue;
      if (iv.lo > domain.hi) break;
      if (iv.lo > cursor) out.push_back({cursor, iv.lo});
      cursor = std::max(cursor, iv.hi);
    }
    if (cursor < domain.hi) out.push_back({cursor, domain.hi});
    return IntervalSet(std::move(out));
  }

  // Image under a monotone increasing map.
  IntervalSet map(const std::function<double(double)>& f) const {
    std::vector<Interval> out;
    out.reserve(parts_.size());
    for (const auto& iv : parts_) out.push_back({f(iv.lo), f(iv.hi)});
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

  std::string to_string(int precision = 6) const {
    if (parts_.empty()) return "{}";
    std::string out;
    char buf[96];
    for (const auto& iv : parts_) {
      if (!out.empty()) out += " U ";
      std::snprintf(buf, sizeof(buf), "[%.*f, %.*f]", precision, iv.lo, precision, iv.hi);
      out += buf;
    }
    return out;
  }

 private:
  void normalize() {
    std::erase_if(parts_, [](const Interval& iv) { return !(iv.hi >= iv.lo); });
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : parts_) {
      if (!merged.empty() && iv.lo <= merged.back().hi + kMergeTol) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

}  // namespace rayspace
