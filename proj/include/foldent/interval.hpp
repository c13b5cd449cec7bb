#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace foldent {

// Closed interval [lo, hi]; branch domains are interpreted half-open [lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x < hi; }
    bool contains_closed(double x) const { return x >= lo && x <= hi; }
    bool empty(double tol = 0.0) const { return hi - lo <= tol; }
};

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline bool overlaps(const Interval& a, const Interval& b, double tol = 0.0) {
    return a.lo < b.hi - tol && b.lo < a.hi - tol;
}

// Sorted disjoint union of intervals.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

    void add(Interval iv) {
        if (iv.hi <= iv.lo) return;
        parts_.push_back(iv);
        dirty_ = true;
    }

    const std::vector<Interval>& parts() const {
        const_cast<IntervalSet*>(this)->normalize();
        return parts_;
    }

    bool contains(double x) const {
        for (const auto& p : parts())
            if (x >= p.lo && x <= p.hi) return true;
        return false;
    }

    double total_length() const {
        double s = 0.0;
        for (const auto& p : parts()) s += p.width();
        return s;
    }

    bool empty() const { return parts().empty(); }

    // this ⊆ other up to endpoint slack.
    bool subset_of(const IntervalSet& other, double tol) const {
        for (const auto& p : parts()) {
            double covered = p.lo;
            for (const auto& q : other.parts()) {
                if (q.lo > covered + tol) break;
                if (q.hi > covered) covered = std::max(covered, q.hi);
            }
            if (covered < p.hi - tol) return false;
        }
        return true;
    }

private:
    void normalize() {
        if (!dirty_) return;
        dirty_ = false;
        if (parts_.empty()) return;
        std::sort(parts_.begin(), parts_.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> out;
        out.push_back(parts_[0]);
        for (size_t i = 1; i < parts_.size(); ++i) {
            if (parts_[i].lo <= out.back().hi + 1e-15)
                out.back().hi = std::max(out.back().hi, parts_[i].hi);
            else
                out.push_back(parts_[i]);
        }
        parts_ = std::move(out);
    }

    std::vector<Interval> parts_;
    bool dirty_ = false;
};

} // namespace foldent
