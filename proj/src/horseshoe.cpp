#include "foldent/horseshoe.hpp"

#include <algorithm>
#include <cmath>

#include "foldent/errors.hpp"

namespace foldent {

HorseshoeSystem HorseshoeSystem::full_shift(std::shared_ptr<const PiecewiseMap> map,
                                            std::vector<Piece> pieces, int return_time) {
    HorseshoeSystem h;
    h.map_ = std::move(map);
    h.pieces_ = std::move(pieces);
    h.return_time_ = return_time;
    h.nsym_ = h.pieces_.size();
    h.log_nsym_ = std::log(double(h.nsym_));
    return h;
}

HorseshoeSystem HorseshoeSystem::block_laps(std::shared_ptr<const PiecewiseMap> map, Interval block,
                                            double log_two_m, int return_time) {
    HorseshoeSystem h;
    h.map_ = std::move(map);
    h.block_ = block;
    h.return_time_ = return_time;
    h.log_nsym_ = log_two_m;
    h.is_block_ = true;
    if (log_two_m < std::log(double(1ull << 62)))
        h.nsym_ = (std::uint64_t)std::llround(std::exp(log_two_m));
    return h;
}

std::uint64_t HorseshoeSystem::n_symbols() const {
    if (!enumerable()) throw budget_error("symbol count exceeds enumerable range");
    return nsym_;
}

Interval HorseshoeSystem::decode(const std::vector<int>& symbols) const {
    if (symbols.empty()) throw constraint_error("decode needs at least one symbol");
    if (is_block_) {
        std::uint64_t n = n_symbols();
        double w = block_.width() / double(n);
        std::uint64_t s = std::uint64_t(symbols[0]);
        return {block_.lo + double(s) * w, block_.lo + double(s + 1) * w};
    }
    // backward nested inversion through the coded branches
    Interval iv = pieces_.at(symbols.back()).iv;
    for (size_t i = symbols.size() - 1; i-- > 0;) {
        const Piece& p = pieces_.at(symbols[i]);
        const Branch& b = map_->branches().at(p.branch);
        // invert the (monotone, affine for all shipped systems) branch on both endpoints
        auto inv = [&](double y) {
            if (b.fn.kind == BranchFn::Kind::Affine) return (y - b.fn.c0) / b.fn.c1;
            double lo = p.iv.lo, hi = p.iv.hi;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (lo + hi);
                bool below = b.eval(m) < y;
                if (below == p.increasing) lo = m; else hi = m;
            }
            return 0.5 * (lo + hi);
        };
        double ya = inv(iv.lo), yb = inv(iv.hi);
        iv = {std::min(ya, yb), std::max(ya, yb)};
    }
    return iv;
}

double CodedMeasure::entropy_per_iterate() const {
    if (prob.empty()) return system->log_n_symbols() / system->return_time();
    double h = 0.0;
    for (double p : prob)
        if (p > 0) h -= p * std::log(p);
    return h / system->return_time();
}

double CodedMeasure::cdf(double x, double tol) const {
    if (system->is_block()) {
        const Interval& b = system->block();
        if (x <= b.lo) return 0.0;
        if (x >= b.hi) return 1.0;
        return (x - b.lo) / b.width();
    }
    const auto& pieces = system->pieces();
    size_t n = pieces.size();
    std::vector<double> p = prob;
    if (p.empty()) p.assign(n, 1.0 / double(n));

    // Self-similar descent: the conditional measure on cylinder s is the branch-s
    // inverse image of the whole measure, so F(x) = sum_{cyl(s) left of x} p_s
    // plus p_s* F(f(x)) on the straddled cylinder (orientation-flipped on
    // decreasing branches). The tracked coefficient shrinks geometrically.
    double acc = 0.0, coef = 1.0;
    double y = x;
    for (int depth = 0; depth < 80 && std::abs(coef) > tol; ++depth) {
        double below = 0.0;
        int inside = -1;
        for (size_t s = 0; s < n; ++s) {
            if (y >= pieces[s].iv.hi) below += p[s];
            else if (y > pieces[s].iv.lo) inside = int(s);
        }
        acc += coef * below;
        if (inside < 0) return acc;
        const Piece& pc = pieces[inside];
        if (pc.increasing) {
            coef *= p[inside];
        } else {
            acc += coef * p[inside];
            coef *= -p[inside];
        }
        y = system->map().branches().at(pc.branch).eval(y);
    }
    return acc;
}

} // namespace foldent
