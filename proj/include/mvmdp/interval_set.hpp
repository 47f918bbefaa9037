#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mvmdp/errors.hpp"

namespace mvmdp {

/// Closed interval [lo, hi]. Degenerate (lo == hi) is allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// A finite union of disjoint closed intervals kept sorted by lower endpoint.
/// Pieces produced by subtraction that are shorter than eps_merge are
/// dropped, and gaps narrower than eps_merge are merged away; both rules keep
/// the representation canonical and guarantee that repeated subtraction makes
/// measurable progress.
class IntervalSet {
public:
    static constexpr double eps_merge = 1e-12;

    IntervalSet() = default;

    /// Single-interval set [lo, hi]. Degenerate inputs are kept as points.
    IntervalSet(double lo, double hi) {
        if (!(lo <= hi))
            throw std::invalid_argument("IntervalSet: lo " + std::to_string(lo) +
                                        " exceeds hi " + std::to_string(hi));
        parts_.push_back({lo, hi});
    }

    /// Builds a set from arbitrary intervals: sorts, merges overlaps and
    /// near-gaps. Explicitly constructed degenerate intervals are kept.
    explicit IntervalSet(std::vector<Interval> parts) {
        for (const auto& p : parts)
            if (!(p.lo <= p.hi))
                throw std::invalid_argument("IntervalSet: interval with lo > hi");
        std::sort(parts.begin(), parts.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (const auto& p : parts) {
            if (!parts_.empty() && p.lo <= parts_.back().hi + eps_merge)
                parts_.back().hi = std::max(parts_.back().hi, p.hi);
            else
                parts_.push_back(p);
        }
    }

    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }
    const std::vector<Interval>& parts() const { return parts_; }

    /// Total Lebesgue measure of the set.
    double total_length() const {
        double acc = 0.0;
        for (const auto& p : parts_) acc += p.length();
        return acc;
    }

    bool contains(double x) const {
        for (const auto& p : parts_)
            if (p.contains(x)) return true;
        return false;
    }

    /// Removes the open interior of [cut.lo, cut.hi] from the set. Remaining
    /// pieces stay closed, so the cut's endpoints survive in the neighbors.
    /// Slivers shorter than eps_merge are dropped. cut.lo may exceed cut.hi,
    /// which encodes an empty cut and leaves the set unchanged.
    void subtract(const Interval& cut) {
        if (cut.lo > cut.hi) return;
        std::vector<Interval> next;
        next.reserve(parts_.size() + 1);
        for (const auto& p : parts_) {
            if (cut.hi < p.lo || cut.lo > p.hi) {
                next.push_back(p);
                continue;
            }
            if (p.lo < cut.lo && cut.lo - p.lo >= eps_merge) next.push_back({p.lo, cut.lo});
            if (cut.hi < p.hi && p.hi - cut.hi >= eps_merge) next.push_back({cut.hi, p.hi});
        }
        parts_.clear();
        for (const auto& p : next) {
            if (!parts_.empty() && p.lo <= parts_.back().hi + eps_merge)
                parts_.back().hi = std::max(parts_.back().hi, p.hi);
            else
                parts_.push_back(p);
        }
    }

    /// Removes the half line (-inf, bound].
    void subtract_below(double bound) {
        std::vector<Interval> next;
        next.reserve(parts_.size());
        for (const auto& p : parts_) {
            if (p.hi <= bound) continue;
            if (p.lo > bound)
                next.push_back(p);
            else if (p.hi - bound >= eps_merge)
                next.push_back({bound, p.hi});
        }
        parts_ = std::move(next);
    }

    /// Midpoint of the interval with the largest lower endpoint. The search
    /// consumes the domain right to left, which keeps high-mean candidates
    /// (the ones that can prune half lines) early in the schedule.
    double first_interval_midpoint() const {
        if (parts_.empty())
            throw EmptyDomain("first_interval_midpoint: interval set is empty");
        const Interval& p = parts_.back();
        return 0.5 * (p.lo + p.hi);
    }

private:
    std::vector<Interval> parts_;
};

}  // namespace mvmdp
