#include "foldent/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "foldent/errors.hpp"

namespace foldent {

// ---------------------------------------------------------------- builders

MeasureRep MeasureRep::empirical(std::vector<double> points, std::vector<double> weights) {
    if (points.empty()) throw constraint_error("empirical measure needs at least one point");
    if (weights.empty()) weights.assign(points.size(), 1.0 / double(points.size()));
    if (weights.size() != points.size())
        throw constraint_error("empirical weights/points size mismatch");
    std::vector<size_t> idx(points.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return points[a] < points[b]; });
    MeasureRep m;
    m.kind_ = Kind::Empirical;
    double tot = 0.0;
    for (size_t i : idx) {
        if (weights[i] < 0) throw constraint_error("negative empirical weight");
        tot += weights[i];
        // merge ties for deterministic CDF queries
        if (!m.points_.empty() && points[i] == m.points_.back())
            m.weights_.back() += weights[i];
        else {
            m.points_.push_back(points[i]);
            m.weights_.push_back(weights[i]);
        }
    }
    if (tot <= 0) throw constraint_error("empirical measure has zero mass");
    for (double& w : m.weights_) w /= tot;
    return m;
}

MeasureRep MeasureRep::density(std::vector<double> heights) {
    if (heights.empty()) throw constraint_error("density needs at least one cell");
    MeasureRep m;
    m.kind_ = Kind::Density;
    double mean = 0.0;
    for (double h : heights) {
        if (h < 0) throw constraint_error("negative density height");
        mean += h;
    }
    mean /= double(heights.size());
    if (mean <= 0) throw constraint_error("density has zero mass");
    for (double& h : heights) h /= mean;  // Riemann sum = 1
    m.heights_ = std::move(heights);
    return m;
}

MeasureRep MeasureRep::lebesgue(int grid_n) {
    return density(std::vector<double>(size_t(grid_n), 1.0));
}

MeasureRep MeasureRep::atomic(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw constraint_error("atomic measure needs at least one atom");
    std::sort(atoms.begin(), atoms.end());
    MeasureRep m;
    m.kind_ = Kind::Atomic;
    double tot = 0.0;
    for (auto& [x, w] : atoms) {
        if (w < 0) throw constraint_error("negative atom mass");
        tot += w;
        if (!m.atoms_.empty() && x == m.atoms_.back().first)
            m.atoms_.back().second += w;
        else
            m.atoms_.emplace_back(x, w);
    }
    if (tot <= 0) throw constraint_error("atomic measure has zero mass");
    for (auto& [x, w] : m.atoms_) w /= tot;
    return m;
}

MeasureRep MeasureRep::coded(std::shared_ptr<const HorseshoeSystem> sys, std::vector<double> prob) {
    if (!sys) throw constraint_error("coded measure needs a system");
    if (!prob.empty()) {
        if (!sys->enumerable() || prob.size() != sys->n_symbols())
            throw Error("dimension-mismatch", "prob vector size must match coded symbol count");
        double tot = 0.0;
        for (double p : prob) {
            if (p < 0) throw constraint_error("negative symbol probability");
            tot += p;
        }
        for (double& p : prob) p /= tot;
    }
    MeasureRep m;
    m.kind_ = Kind::CodedMarkov;
    m.coded_ = CodedMeasure{std::move(sys), std::move(prob)};
    return m;
}

double MeasureRep::total_mass() const {
    switch (kind_) {
        case Kind::Empirical: {
            double s = 0;
            for (double w : weights_) s += w;
            return s;
        }
        case Kind::Density: {
            double s = 0;
            for (double h : heights_) s += h;
            return s / double(heights_.size());
        }
        case Kind::Atomic: {
            double s = 0;
            for (auto& [x, w] : atoms_) s += w;
            return s;
        }
        case Kind::CodedMarkov: {
            if (coded_.prob.empty()) return 1.0;
            double s = 0;
            for (double p : coded_.prob) s += p;
            return s;
        }
    }
    return 0.0;
}

double MeasureRep::cdf_left(double x) const {
    switch (kind_) {
        case Kind::Empirical: {
            if (cdf_cache_.empty()) {
                cdf_cache_.resize(weights_.size() + 1, 0.0);
                for (size_t i = 0; i < weights_.size(); ++i)
                    cdf_cache_[i + 1] = cdf_cache_[i] + weights_[i];
            }
            size_t i = std::lower_bound(points_.begin(), points_.end(), x) - points_.begin();
            return cdf_cache_[i];
        }
        case Kind::Density: {
            if (cdf_cache_.empty()) {
                cdf_cache_.resize(heights_.size() + 1, 0.0);
                for (size_t i = 0; i < heights_.size(); ++i)
                    cdf_cache_[i + 1] = cdf_cache_[i] + heights_[i] / double(heights_.size());
            }
            if (x <= 0) return 0.0;
            if (x >= 1) return cdf_cache_.back();
            double t = x * double(heights_.size());
            size_t c = size_t(t);
            return cdf_cache_[c] + (t - double(c)) * heights_[c] / double(heights_.size());
        }
        case Kind::Atomic: {
            double s = 0;
            for (auto& [p, w] : atoms_) {
                if (p >= x) break;
                s += w;
            }
            return s;
        }
        case Kind::CodedMarkov: {
            if (coded_.system->is_block() && coded_.system->sampler)
                return approximant().cdf_left(x);
            return coded_.cdf(x);
        }
    }
    return 0.0;
}

const MeasureRep& MeasureRep::approximant(int samples, std::uint64_t seed) const {
    if (kind_ != Kind::CodedMarkov) return *this;
    if (!approx_) {
        if (coded_.system->sampler) {
            std::vector<double> pts, w;
            coded_.system->sampler(samples, seed, pts, w);
            approx_ = std::make_shared<MeasureRep>(MeasureRep::empirical(std::move(pts), std::move(w)));
        } else {
            // explicit system: deterministic sample path of the coded process
            auto pts = coded_sample_path(coded_, samples, seed);
            approx_ = std::make_shared<MeasureRep>(MeasureRep::empirical(std::move(pts)));
        }
    }
    return *approx_;
}

// ---------------------------------------------------------------- integrate

namespace {

double clamp_phi(double v, IntegrateStats* st) {
    if (!std::isfinite(v) || v < kLogClamp) {
        if (st) st->clamped++;
        return kLogClamp;
    }
    return v;
}

// adaptive Simpson on [a,b] for a bounded-after-clamp integrand
double simpson_adaptive(const std::function<double(double)>& g, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_adaptive(g, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_adaptive(g, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double simpson(const std::function<double(double)>& g, double a, double b, double tol, int depth = 18) {
    if (b <= a) return 0.0;
    double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson_adaptive(g, a, b, fa, fm, fb, whole, tol, depth);
}

} // namespace

double integrate_over(const MeasureRep& mu, const std::function<double(double)>& phi,
                      const IntervalSet& domain, IntegrateStats* stats) {
    auto cphi = [&](double x) { return clamp_phi(phi(x), stats); };
    double acc = 0.0;
    switch (mu.kind()) {
        case MeasureRep::Kind::Empirical: {
            const auto& pts = mu.points();
            const auto& w = mu.weights();
            for (const auto& iv : domain.parts()) {
                size_t lo = std::lower_bound(pts.begin(), pts.end(), iv.lo) - pts.begin();
                size_t hi = std::lower_bound(pts.begin(), pts.end(), iv.hi) - pts.begin();
                for (size_t i = lo; i < hi; ++i) acc += w[i] * cphi(pts[i]);
            }
            break;
        }
        case MeasureRep::Kind::Atomic: {
            for (const auto& iv : domain.parts())
                for (const auto& [x, w] : mu.atoms())
                    if (x >= iv.lo && x < iv.hi) acc += w * cphi(x);
            break;
        }
        case MeasureRep::Kind::Density: {
            int n = mu.grid_n();
            double h = 1.0 / double(n);
            for (const auto& iv : domain.parts()) {
                int c0 = std::max(0, int(std::floor(iv.lo * n)));
                int c1 = std::min(n - 1, int(std::floor((iv.hi - 1e-18) * n)));
                for (int c = c0; c <= c1; ++c) {
                    double a = std::max(iv.lo, c * h), b = std::min(iv.hi, (c + 1) * h);
                    if (b <= a) continue;
                    double rho = mu.heights()[c];
                    if (rho == 0.0) continue;
                    acc += rho * simpson(cphi, a, b, 1e-12);
                }
            }
            break;
        }
        case MeasureRep::Kind::CodedMarkov: {
            if (mu.coded_data().system->is_block() || mu.coded_data().system->sampler)
                return integrate_over(mu.approximant(), phi, domain, stats);
            // explicit coded system: cylinder quadrature to fixed resolution
            const auto& sys = *mu.coded_data().system;
            std::vector<double> p = mu.coded_data().prob;
            if (p.empty()) p.assign(sys.pieces().size(), 1.0 / double(sys.pieces().size()));
            struct Node { Interval iv; double mass; };
            std::function<double(Node, int)> rec = [&](Node nd, int depth) -> double {
                bool any = false, full = false;
                for (const auto& part : domain.parts()) {
                    if (overlaps(part, nd.iv)) any = true;
                    if (nd.iv.lo >= part.lo && nd.iv.hi <= part.hi) full = true;
                }
                if (!any) return 0.0;
                if ((full && nd.iv.width() < 1e-6) || nd.iv.width() < 1e-12 || depth > 48)
                    return nd.mass * cphi(nd.iv.mid());
                double s = 0.0;
                for (size_t sy = 0; sy < sys.pieces().size(); ++sy) {
                    const auto& pc = sys.pieces()[sy];
                    const Branch& b = sys.map().branches().at(pc.branch);
                    auto inv = [&](double y) {
                        if (b.fn.kind == BranchFn::Kind::Affine) return (y - b.fn.c0) / b.fn.c1;
                        double lo = pc.iv.lo, hi = pc.iv.hi;
                        for (int it = 0; it < 80; ++it) {
                            double m = 0.5 * (lo + hi);
                            bool below = b.eval(m) < y;
                            if (below == pc.increasing) lo = m; else hi = m;
                        }
                        return 0.5 * (lo + hi);
                    };
                    double ya = inv(nd.iv.lo), yb = inv(nd.iv.hi);
                    s += rec({{std::min(ya, yb), std::max(ya, yb)}, nd.mass * p[sy]}, depth + 1);
                }
                return s;
            };
            // top level: cylinders themselves
            double s = 0.0;
            for (size_t sy = 0; sy < sys.pieces().size(); ++sy)
                s += rec({sys.pieces()[sy].iv, p[sy]}, 1);
            return s;
        }
    }
    if (!std::isfinite(acc)) throw Error("non-finite-result", "integral overflowed after clamping");
    return acc;
}

double integrate(const MeasureRep& mu, const std::function<double(double)>& phi,
                 IntegrateStats* stats) {
    IntervalSet all;
    all.add({0.0, 1.0 + 1e-12});
    return integrate_over(mu, phi, all, stats);
}

// ---------------------------------------------------------------- pushforward

MeasureRep pushforward(const MeasureRep& mu, const PiecewiseMap& map, IntegrateStats* stats) {
    switch (mu.kind()) {
        case MeasureRep::Kind::Empirical: {
            std::vector<double> pts(mu.points().size());
            for (size_t i = 0; i < pts.size(); ++i) pts[i] = map.eval(mu.points()[i]);
            return MeasureRep::empirical(std::move(pts), mu.weights());
        }
        case MeasureRep::Kind::Atomic: {
            std::vector<std::pair<double, double>> atoms;
            for (auto [x, w] : mu.atoms()) atoms.emplace_back(map.eval(x), w);
            // builder merges atoms at identical positions; merge 1e-12-close ones too
            std::sort(atoms.begin(), atoms.end());
            std::vector<std::pair<double, double>> merged;
            for (auto& [x, w] : atoms) {
                if (!merged.empty() && x - merged.back().first < 1e-12)
                    merged.back().second += w;
                else
                    merged.emplace_back(x, w);
            }
            return MeasureRep::atomic(std::move(merged));
        }
        case MeasureRep::Kind::Density: {
            int n = mu.grid_n();
            std::vector<double> out(size_t(n), 0.0);
            for (int c = 0; c < n; ++c) {
                double y = (c + 0.5) / double(n);
                double v = 0.0;
                for (auto [x, bi] : map.preimages(y, 1e-11)) {
                    double d = std::abs(map.deriv(x));
                    if (d < 1e-12) {
                        // one-sided limit stand-in, flagged
                        if (stats) stats->degenerate++;
                        d = 1e-12;
                    }
                    double t = x * n;
                    int cell = std::min(n - 1, std::max(0, int(t)));
                    v += mu.heights()[cell] / d;
                }
                out[c] = v;
            }
            return MeasureRep::density(std::move(out));
        }
        case MeasureRep::Kind::CodedMarkov: {
            // shift-invariance: the coded measure is invariant under its own map
            return mu;
        }
    }
    throw Error("internal", "unhandled measure kind");
}

// ---------------------------------------------------------------- Bowen balls

namespace {

struct SupportView {
    std::vector<double> pts;
    std::vector<double> w;
};

SupportView support_of(const MeasureRep& mu) {
    SupportView s;
    switch (mu.kind()) {
        case MeasureRep::Kind::Empirical:
            s.pts = mu.points();
            s.w = mu.weights();
            break;
        case MeasureRep::Kind::Atomic:
            for (auto& [x, w] : mu.atoms()) {
                s.pts.push_back(x);
                s.w.push_back(w);
            }
            break;
        case MeasureRep::Kind::Density: {
            int n = mu.grid_n();
            for (int c = 0; c < n; ++c) {
                s.pts.push_back((c + 0.5) / n);
                s.w.push_back(mu.heights()[c] / n);
            }
            break;
        }
        case MeasureRep::Kind::CodedMarkov: {
            const auto& a = mu.approximant();
            s.pts = a.points();
            s.w = a.weights();
            break;
        }
    }
    return s;
}

} // namespace

std::vector<double> bowen_masses(const MeasureRep& mu, const PiecewiseMap& map, double x,
                                 double delta, int n_max,
                                 const std::function<double(double)>* radius_fn) {
    auto radius_at = [&](double cx) {
        return radius_fn ? std::min((*radius_fn)(cx), delta) : delta;
    };
    SupportView sup = support_of(mu);
    std::vector<double> masses;
    masses.reserve(n_max);

    // step 0 candidates: support points within the first radius of x
    double r0 = radius_at(x);
    size_t lo = std::lower_bound(sup.pts.begin(), sup.pts.end(), x - r0) - sup.pts.begin();
    size_t hi = std::upper_bound(sup.pts.begin(), sup.pts.end(), x + r0) - sup.pts.begin();
    std::vector<double> ys(sup.pts.begin() + lo, sup.pts.begin() + hi);
    std::vector<double> ws(sup.w.begin() + lo, sup.w.begin() + hi);

    double cx = x;
    double alive_mass = 0.0;
    for (double w : ws) alive_mass += w;
    masses.push_back(alive_mass);

    for (int i = 1; i < n_max; ++i) {
        cx = map.eval(cx);
        double r = radius_at(cx);
        std::vector<double> nys, nws;
        nys.reserve(ys.size());
        nws.reserve(ws.size());
        alive_mass = 0.0;
        for (size_t j = 0; j < ys.size(); ++j) {
            double fy = map.eval(ys[j]);
            if (std::abs(fy - cx) < r) {
                nys.push_back(fy);
                nws.push_back(ws[j]);
                alive_mass += ws[j];
            }
        }
        ys.swap(nys);
        ws.swap(nws);
        masses.push_back(alive_mass);
        if (ys.empty()) {
            while (int(masses.size()) < n_max) masses.push_back(0.0);
            break;
        }
    }
    return masses;
}

double ball_mass(const MeasureRep& mu, const BallSpec& ball, const PiecewiseMap* map) {
    if (ball.radius <= 0) throw constraint_error("ball radius must be positive");
    if (ball.bowen_depth < 1) throw constraint_error("bowen_depth must be >= 1");
    if (ball.bowen_depth == 1) {
        // open metric ball: mass of (c-r, c+r)
        double lo = ball.center - ball.radius, hi = ball.center + ball.radius;
        // open-interval mass: use cdf_left at hi (excludes atoms at hi) minus
        // cdf_left just past lo (excludes atom exactly at lo? open ball excludes lo)
        const MeasureRep& m = mu.kind() == MeasureRep::Kind::CodedMarkov &&
                                      mu.coded_data().system->is_block()
                                  ? mu.approximant()
                                  : mu;
        double massv = m.cdf_left(hi) - m.cdf_left(lo);
        // atoms exactly at lo are outside the open ball
        if (m.kind() == MeasureRep::Kind::Atomic)
            for (auto& [x, w] : m.atoms())
                if (x == lo) massv -= w;
        if (m.kind() == MeasureRep::Kind::Empirical) {
            const auto& pts = m.points();
            size_t i = std::lower_bound(pts.begin(), pts.end(), lo) - pts.begin();
            if (i < pts.size() && pts[i] == lo) massv -= m.weights()[i];
        }
        return std::max(0.0, massv);
    }
    if (!map) throw constraint_error("Bowen ball mass needs the map");
    auto ms = bowen_masses(mu, *map, ball.center, ball.radius, ball.bowen_depth);
    return ms.back();
}

// ---------------------------------------------------------------- W1

double w1_distance(const MeasureRep& mu, const MeasureRep& nu) {
    auto discrete = [](const MeasureRep& m) {
        return m.kind() == MeasureRep::Kind::Empirical || m.kind() == MeasureRep::Kind::Atomic;
    };
    if (discrete(mu) && discrete(nu)) {
        // exact merged-breakpoint integration of |F_mu - F_nu|
        SupportView a = support_of(mu), b = support_of(nu);
        std::vector<double> bp;
        bp.reserve(a.pts.size() + b.pts.size() + 2);
        bp.insert(bp.end(), a.pts.begin(), a.pts.end());
        bp.insert(bp.end(), b.pts.begin(), b.pts.end());
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        double acc = 0.0;
        double Fa = 0.0, Fb = 0.0;
        size_t ia = 0, ib = 0;
        for (size_t i = 0; i + 1 <= bp.size(); ++i) {
            while (ia < a.pts.size() && a.pts[ia] <= bp[i]) Fa += a.w[ia++];
            while (ib < b.pts.size() && b.pts[ib] <= bp[i]) Fb += b.w[ib++];
            double next = (i + 1 < bp.size()) ? bp[i + 1] : bp[i];
            acc += std::abs(Fa - Fb) * (next - bp[i]);
        }
        return acc;
    }
    // grid quadrature of the CDF difference
    const int n = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = (i + 0.5) / double(n);
        acc += std::abs(mu.cdf_left(t) - nu.cdf_left(t));
    }
    return acc / double(n);
}

// ---------------------------------------------------------------- Birkhoff

MeasureRep birkhoff_measure(const PiecewiseMap& map, double x0, long burn_in, long n) {
    if (n < 1) throw constraint_error("birkhoff sample count must be >= 1");
    const std::string& nm = map.name();
    if (nm.rfind("nfold:", 0) == 0) {
        // Double-precision iteration of x -> Nx mod 1 shifts the mantissa out and
        // collapses onto 0 after ~53 steps. Realize an irrational-like orbit by
        // extending the seed's base-N digits with a seeded random digit tail.
        int N = std::stoi(nm.substr(6));
        std::uint64_t seed;
        static_assert(sizeof(double) == sizeof(std::uint64_t));
        std::memcpy(&seed, &x0, sizeof seed);
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<int> digit(0, N - 1);
        const int depth = 40;  // digits of lookahead per emitted point
        std::vector<int> digits;
        digits.reserve(size_t(burn_in + n) + depth + 1);
        {
            double x = x0;
            for (int i = 0; i < 60 && x > 0; ++i) {  // seed digits from x0 itself
                x *= N;
                int d = std::min(N - 1, int(x));
                digits.push_back(d);
                x -= d;
            }
        }
        while (long(digits.size()) < burn_in + n + depth) digits.push_back(digit(rng));
        std::vector<double> pts;
        pts.reserve(size_t(n));
        for (long t = burn_in; t < burn_in + n; ++t) {
            double x = 0.0;
            for (int j = depth - 1; j >= 0; --j) x = (x + digits[size_t(t) + j]) / N;
            pts.push_back(x);
        }
        return MeasureRep::empirical(std::move(pts));
    }
    std::vector<double> pts;
    pts.reserve(size_t(n));
    double x = x0;
    for (long t = 0; t < burn_in + n; ++t) {
        if (t >= burn_in) pts.push_back(x);
        x = map.eval(x);
        if (x >= 1.0) x -= std::floor(x);
        if (x > 1.0 - 1e-15) x = 0.0;
        if (x < 0.0) x = 0.0;
    }
    return MeasureRep::empirical(std::move(pts));
}

MeasureRep project_to_density(const MeasureRep& mu, int grid_n) {
    std::vector<double> h(size_t(grid_n), 0.0);
    for (int c = 0; c < grid_n; ++c)
        h[c] = mu.mass({double(c) / grid_n, double(c + 1) / grid_n}) * grid_n;
    return MeasureRep::density(std::move(h));
}

MeasureRep bernoulli_on_map(std::shared_ptr<const PiecewiseMap> map, std::vector<double> prob) {
    std::vector<HorseshoeSystem::Piece> pieces;
    for (int bi = 0; bi < int(map->branches().size()); ++bi) {
        const Branch& b = map->branches()[bi];
        Interval img = b.image();
        if (img.width() < 1.0 - 1e-9)
            throw constraint_error("bernoulli coding needs full branches (branch " +
                                   std::to_string(bi) + " image is not [0,1])");
        pieces.push_back({b.domain, bi, b.monotonicity != Monotonicity::Decreasing});
    }
    if (prob.size() != pieces.size())
        throw Error("dimension-mismatch", "bernoulli prob size must equal branch count");
    auto sys = std::make_shared<HorseshoeSystem>(
        HorseshoeSystem::full_shift(std::move(map), std::move(pieces), 1));
    return MeasureRep::coded(sys, std::move(prob));
}

std::vector<double> coded_sample_path(const CodedMeasure& cm, long n, std::uint64_t seed) {
    const auto& sys = *cm.system;
    if (sys.is_block()) throw constraint_error("sample path needs an explicit coded system");
    size_t k = sys.pieces().size();
    std::vector<double> p = cm.prob;
    if (p.empty()) p.assign(k, 1.0 / double(k));
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> draw(p.begin(), p.end());
    const int depth = 40;
    std::vector<int> syms(size_t(n) + depth);
    for (auto& s : syms) s = draw(rng);
    std::vector<double> pts;
    pts.reserve(size_t(n));
    std::vector<int> window(depth);
    for (long t = 0; t < n; ++t) {
        for (int j = 0; j < depth; ++j) window[j] = syms[size_t(t) + j];
        pts.push_back(sys.decode(window).mid());
    }
    return pts;
}

// ---------------------------------------------------------------- io

using nlohmann::json;

std::string MeasureRep::to_json() const {
    json j;
    switch (kind_) {
        case Kind::Empirical:
            j["kind"] = "empirical";
            j["points"] = points_;
            j["weights"] = weights_;
            break;
        case Kind::Density:
            j["kind"] = "density";
            j["grid_n"] = heights_.size();
            j["heights"] = heights_;
            break;
        case Kind::Atomic: {
            j["kind"] = "atomic";
            json a = json::array();
            for (auto& [x, w] : atoms_) a.push_back({{"x", x}, {"mass", w}});
            j["atoms"] = a;
            break;
        }
        case Kind::CodedMarkov:
            j["kind"] = "markov";
            j["prob"] = coded_.prob;
            j["return_time"] = coded_.system->return_time();
            j["log_symbols"] = coded_.system->log_n_symbols();
            break;
    }
    return j.dump(2);
}

std::string MeasureRep::to_csv() const {
    std::string out = "coordinate,weight\n";
    char buf[64];
    auto row = [&](double x, double w) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", x, w);
        out += buf;
    };
    switch (kind_) {
        case Kind::Empirical:
            for (size_t i = 0; i < points_.size(); ++i) row(points_[i], weights_[i]);
            break;
        case Kind::Density:
            for (size_t c = 0; c < heights_.size(); ++c)
                row((double(c) + 0.5) / double(heights_.size()), heights_[c]);
            break;
        case Kind::Atomic:
            for (auto& [x, w] : atoms_) row(x, w);
            break;
        case Kind::CodedMarkov: {
            const auto& a = approximant();
            for (size_t i = 0; i < a.points().size(); ++i) row(a.points()[i], a.weights()[i]);
            break;
        }
    }
    return out;
}

MeasureRep MeasureRep::from_json(const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("kind");
    if (kind == "empirical")
        return empirical(j.at("points").get<std::vector<double>>(),
                         j.value("weights", std::vector<double>{}));
    if (kind == "density") return density(j.at("heights").get<std::vector<double>>());
    if (kind == "atomic") {
        std::vector<std::pair<double, double>> atoms;
        for (auto& a : j.at("atoms")) atoms.emplace_back(a.at("x"), a.at("mass"));
        return atomic(std::move(atoms));
    }
    throw config_error("unknown or non-deserializable measure kind '" + kind + "'");
}

} // namespace foldent
