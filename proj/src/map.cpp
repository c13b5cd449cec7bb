#include "foldent/map.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace foldent {

// ---------------------------------------------------------------- BranchFn

BranchFn BranchFn::affine(double c0, double c1) {
    BranchFn f;
    f.kind = Kind::Affine;
    f.c0 = c0;
    f.c1 = c1;
    return f;
}

BranchFn BranchFn::poly(std::vector<double> coeffs) {
    BranchFn f;
    f.kind = Kind::Poly;
    f.coeffs = std::move(coeffs);
    return f;
}

BranchFn BranchFn::cubic(double x0, double y0, double m0, double x1, double y1, double m1) {
    BranchFn f;
    f.kind = Kind::Cubic;
    f.x0 = x0; f.y0 = y0; f.m0 = m0;
    f.x1 = x1; f.y1 = y1; f.m1 = m1;
    return f;
}

BranchFn BranchFn::cosine(double amp, double omega, double center, double offset) {
    BranchFn f;
    f.kind = Kind::Cosine;
    f.amp = amp; f.omega = omega; f.center = center; f.offset = offset;
    return f;
}

BranchFn BranchFn::flat(double value) {
    BranchFn f;
    f.kind = Kind::Flat;
    f.c0 = value;
    return f;
}

double BranchFn::eval(double x) const {
    switch (kind) {
        case Kind::Affine: return c0 + c1 * x;
        case Kind::Poly: {
            double v = 0.0;
            for (size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
            return v;
        }
        case Kind::Cubic: {
            double h = x1 - x0, t = (x - x0) / h;
            double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 +
                   (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
        }
        case Kind::Cosine: return amp * std::cos(omega * (x - center)) + offset;
        case Kind::Flat: return c0;
    }
    return 0.0;
}

double BranchFn::deriv(double x) const {
    switch (kind) {
        case Kind::Affine: return c1;
        case Kind::Poly: {
            double v = 0.0;
            for (size_t i = coeffs.size(); i-- > 1;) v = v * x + coeffs[i] * double(i);
            return v;
        }
        case Kind::Cubic: {
            double h = x1 - x0, t = (x - x0) / h;
            double t2 = t * t;
            return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * m0 +
                    (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * m1) / h;
        }
        case Kind::Cosine: return -amp * omega * std::sin(omega * (x - center));
        case Kind::Flat: return 0.0;
    }
    return 0.0;
}

double BranchFn::second_deriv(double x) const {
    switch (kind) {
        case Kind::Affine: return 0.0;
        case Kind::Poly: {
            double v = 0.0;
            for (size_t i = coeffs.size(); i-- > 2;) v = v * x + coeffs[i] * double(i) * double(i - 1);
            return v;
        }
        case Kind::Cubic: {
            double h = x1 - x0, t = (x - x0) / h;
            return ((12 * t - 6) * y0 + (6 * t - 4) * h * m0 + (-12 * t + 6) * y1 +
                    (6 * t - 2) * h * m1) / (h * h);
        }
        case Kind::Cosine: return -amp * omega * omega * std::cos(omega * (x - center));
        case Kind::Flat: return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------- Branch

Interval Branch::image() const {
    double fa = fn.eval(domain.lo), fb = fn.eval(domain.hi);
    if (monotonicity != Monotonicity::NonMonotone)
        return {std::min(fa, fb), std::max(fa, fb)};
    double lo = std::min(fa, fb), hi = std::max(fa, fb);
    for (double c : interior_critical_points()) {
        double v = fn.eval(c);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

std::vector<double> Branch::interior_critical_points() const {
    std::vector<double> out;
    if (monotonicity != Monotonicity::NonMonotone) return out;
    if (fn.kind == BranchFn::Kind::Cosine) {
        // zeros of sin(omega(x-center)) inside the open domain
        double w = fn.omega;
        long k0 = (long)std::ceil(w * (domain.lo - fn.center) / M_PI - 1e-9);
        for (long k = k0;; ++k) {
            double x = fn.center + double(k) * M_PI / w;
            if (x >= domain.hi - 1e-15) break;
            if (x > domain.lo + 1e-15) out.push_back(x);
            if (out.size() > (1u << 22)) break;  // oscillation guard
        }
        return out;
    }
    // sign changes of f' on a probe grid, refined by bisection
    const int n = 1 << 14;
    double h = domain.width() / n;
    double prev = fn.deriv(domain.lo + 0.5 * h);
    for (int i = 1; i < n; ++i) {
        double x = domain.lo + (i + 0.5) * h;
        double d = fn.deriv(x);
        if ((prev < 0) != (d < 0)) {
            double a = x - h, b = x;
            for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (a + b);
                if ((fn.deriv(a) < 0) != (fn.deriv(m) < 0)) b = m; else a = m;
            }
            out.push_back(0.5 * (a + b));
        }
        prev = d;
    }
    return out;
}

// ---------------------------------------------------------------- PiecewiseMap

PiecewiseMap::PiecewiseMap(std::vector<Branch> branches, std::vector<CriticalItem> critical,
                           double lipschitz, std::string name)
    : branches_(std::move(branches)), critical_(std::move(critical)),
      lipschitz_(lipschitz), name_(std::move(name)) {
    for (size_t i = 1; i < branches_.size(); ++i)
        if (std::abs(branches_[i].domain.lo - branches_[i - 1].domain.hi) > 1e-12)
            throw constraint_error("branch domains must tile [0,1) without gaps");
}

int PiecewiseMap::branch_index_at(double x) const {
    // domains are sorted and tile [0,1)
    int lo = 0, hi = int(branches_.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (x < branches_[mid].domain.hi) hi = mid; else lo = mid + 1;
    }
    if (lo < 0 || lo >= int(branches_.size()) || !branches_[lo].domain.contains(x))
        throw domain_gap_error("x=" + std::to_string(x) + " not in any branch domain");
    return lo;
}

const Branch& PiecewiseMap::branch_at(double x) const { return branches_[branch_index_at(x)]; }

double PiecewiseMap::eval(double x) const { return branch_at(x).eval(x); }

double PiecewiseMap::deriv(double x) const { return branch_at(x).deriv(x); }

std::vector<double> PiecewiseMap::orbit(double x0, int n) const {
    if (n < 1) throw constraint_error("orbit length must be >= 1");
    std::vector<double> out;
    out.reserve(n);
    double x = x0;
    for (int i = 0; i < n; ++i) {
        out.push_back(x);
        if (i + 1 < n) {
            x = eval(x);
            // mod-1 wrap with snap-to-0 for values within 1e-15 of 1
            if (x >= 1.0) x -= std::floor(x);
            if (x > 1.0 - 1e-15) x = 0.0;
            if (x < 0.0) x = 0.0;
        }
    }
    return out;
}

const std::vector<PiecewiseMap::MonotonePiece>& PiecewiseMap::monotone_pieces() const {
    if (!pieces_.empty()) return pieces_;
    for (int bi = 0; bi < int(branches_.size()); ++bi) {
        const Branch& b = branches_[bi];
        std::vector<double> cuts{b.domain.lo};
        for (double c : b.interior_critical_points()) cuts.push_back(c);
        cuts.push_back(b.domain.hi);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            MonotonePiece p;
            p.domain = {cuts[i], cuts[i + 1]};
            p.branch = bi;
            double fa = b.eval(p.domain.lo), fb = b.eval(p.domain.hi);
            p.increasing = fb >= fa;
            p.image = {std::min(fa, fb), std::max(fa, fb)};
            pieces_.push_back(p);
        }
    }
    return pieces_;
}

IntervalSet PiecewiseMap::image_of(const Interval& iv) const {
    IntervalSet out;
    for (const auto& p : monotone_pieces()) {
        double lo = std::max(iv.lo, p.domain.lo), hi = std::min(iv.hi, p.domain.hi);
        if (hi <= lo) continue;
        double fa = branches_[p.branch].eval(lo), fb = branches_[p.branch].eval(hi);
        out.add({std::min(fa, fb), std::max(fa, fb)});
    }
    return out;
}

std::vector<std::pair<double, int>> PiecewiseMap::preimages(double y, double tol) const {
    if (tol <= 0) throw constraint_error("preimage tolerance must be positive");
    std::vector<std::pair<double, int>> out;
    for (const auto& p : monotone_pieces()) {
        if (y < p.image.lo - 1e-15 || y > p.image.hi + 1e-15) continue;
        const Branch& b = branches_[p.branch];
        if (b.fn.kind == BranchFn::Kind::Flat) continue;  // no isolated preimage
        // bracketing bisection to 1e-12 interval width, then one guarded Newton polish
        double a = p.domain.lo, c = p.domain.hi;
        double fa = b.eval(a) - y;
        if (std::abs(fa) < tol * 1e-3) {
            out.emplace_back(a, p.branch);
            continue;
        }
        int iters = 0;
        while (c - a > 1e-12 && iters++ < 200) {
            double m = 0.5 * (a + c);
            double fm = b.eval(m) - y;
            if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { c = m; }
        }
        double x = 0.5 * (a + c);
        double d = b.deriv(x);
        if (std::abs(d) > 1e-9) {
            double xn = x - (b.eval(x) - y) / d;
            if (xn >= p.domain.lo && xn <= p.domain.hi && std::abs(b.eval(xn) - y) < std::abs(b.eval(x) - y))
                x = xn;
        }
        if (std::abs(b.eval(x) - y) > tol)
            throw convergence_error("preimage root-finding stalled at |f(x)-y|=" +
                                    std::to_string(std::abs(b.eval(x) - y)));
        if (x >= p.domain.lo && x < p.domain.hi + 1e-15) out.emplace_back(std::min(x, p.domain.hi), p.branch);
    }
    std::sort(out.begin(), out.end());
    // merge duplicates at monotone-piece seams
    std::vector<std::pair<double, int>> dedup;
    for (auto& pr : out)
        if (dedup.empty() || std::abs(pr.first - dedup.back().first) > 1e-12) dedup.push_back(pr);
    return dedup;
}

IntervalSet PiecewiseMap::sublevel_set(double eps) const {
    if (eps <= 0) throw constraint_error("sublevel eps must be positive");
    IntervalSet out;
    // flat pieces and explicit critical intervals are entirely below any eps
    for (const auto& c : critical_)
        if (c.where.width() > 0) out.add(c.where);
    for (const auto& b : branches_) {
        if (b.fn.kind == BranchFn::Kind::Flat) {
            out.add(b.domain);
            continue;
        }
        if (b.fn.kind == BranchFn::Kind::Affine) {
            if (std::abs(b.fn.c1) < eps) out.add(b.domain);
            continue;
        }
        if (b.fn.kind == BranchFn::Kind::Cosine) {
            // |f'| = |amp*omega*sin(omega(x-center))| : includes each lap boundary
            double peak = std::abs(b.fn.amp * b.fn.omega);
            if (peak < eps) {
                out.add(b.domain);
                continue;
            }
            // around each multiple of pi/omega, |sin| < eps/peak
            double margin = std::asin(std::min(1.0, eps / peak)) / b.fn.omega;
            double step = M_PI / b.fn.omega;
            long k0 = (long)std::floor((b.domain.lo - b.fn.center) / step) - 1;
            for (long k = k0;; ++k) {
                double x = b.fn.center + double(k) * step;
                if (x - margin >= b.domain.hi) break;
                double lo = std::max(x - margin, b.domain.lo), hi = std::min(x + margin, b.domain.hi);
                if (hi > lo) out.add({lo, hi});
                if (k - k0 > (1 << 22)) break;
            }
            continue;
        }
        // generic: probe grid sign changes of |f'| - eps, bisect to 1e-9 endpoints
        const int n = 1 << 12;
        double h = b.domain.width() / n;
        auto g = [&](double x) { return std::abs(b.deriv(x)) - eps; };
        double xa = b.domain.lo;
        double ga = g(xa);
        double run_start = ga < 0 ? xa : -1.0;
        for (int i = 1; i <= n; ++i) {
            double xb = b.domain.lo + i * h;
            double gb = g(xb);
            if ((ga < 0) != (gb < 0)) {
                double lo = xa, hi = xb;
                for (int it = 0; it < 50; ++it) {
                    double m = 0.5 * (lo + hi);
                    if ((g(lo) < 0) != (g(m) < 0)) hi = m; else lo = m;
                }
                double cross = 0.5 * (lo + hi);
                if (gb < 0) run_start = cross;
                else if (run_start >= 0) { out.add({run_start, cross}); run_start = -1.0; }
            }
            xa = xb; ga = gb;
        }
        if (run_start >= 0) out.add({run_start, b.domain.hi});
    }
    return out;
}

// ---------------------------------------------------------------- builders

PiecewiseMap nfold(int N) {
    if (N < 1) throw constraint_error("nfold needs N >= 1");
    std::vector<Branch> bs;
    for (int i = 0; i < N; ++i) {
        Branch b;
        b.domain = {double(i) / N, double(i + 1) / N};
        b.fn = BranchFn::affine(-double(i), double(N));
        b.monotonicity = Monotonicity::Increasing;
        b.smoothness_r = 2.0;
        bs.push_back(b);
    }
    return PiecewiseMap(std::move(bs), {}, double(N), "nfold:" + std::to_string(N));
}

PiecewiseMap skewed_tent(double p) {
    if (p <= 1.0) throw constraint_error("skewed_tent needs p > 1");
    std::vector<Branch> bs(2);
    bs[0].domain = {0.0, 1.0 / p};
    bs[0].fn = BranchFn::affine(0.0, p);
    bs[0].monotonicity = Monotonicity::Increasing;
    bs[1].domain = {1.0 / p, 1.0};
    bs[1].fn = BranchFn::affine(p / (p - 1.0), -p / (p - 1.0));
    bs[1].monotonicity = Monotonicity::Decreasing;
    double L = std::max(p, p / (p - 1.0));
    char buf[32];
    std::snprintf(buf, sizeof buf, "skewed_tent:%g", p);
    return PiecewiseMap(std::move(bs), {}, L, buf);
}

PiecewiseMap logistic(double c) {
    std::vector<Branch> bs(1);
    bs[0].domain = {0.0, 1.0};
    bs[0].fn = BranchFn::poly({0.0, c, -c});
    bs[0].monotonicity = Monotonicity::NonMonotone;
    std::vector<CriticalItem> crit{{{0.5, 0.5}, false}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "logistic:%g", c);
    return PiecewiseMap(std::move(bs), std::move(crit), c, buf);
}

PiecewiseMap identity_map() {
    std::vector<Branch> bs(1);
    bs[0].domain = {0.0, 1.0};
    bs[0].fn = BranchFn::affine(0.0, 1.0);
    bs[0].monotonicity = Monotonicity::Increasing;
    return PiecewiseMap(std::move(bs), {}, 1.0, "identity");
}

// ---------------------------------------------------------------- JSON

using nlohmann::json;

static json fn_to_json(const BranchFn& f) {
    switch (f.kind) {
        case BranchFn::Kind::Affine: return {{"type", "affine"}, {"c0", f.c0}, {"c1", f.c1}};
        case BranchFn::Kind::Poly: return {{"type", "poly"}, {"coeffs", f.coeffs}};
        case BranchFn::Kind::Cubic:
            return {{"type", "cubic"}, {"x0", f.x0}, {"y0", f.y0}, {"m0", f.m0},
                    {"x1", f.x1}, {"y1", f.y1}, {"m1", f.m1}};
        case BranchFn::Kind::Cosine:
            return {{"type", "cosine"}, {"amp", f.amp}, {"omega", f.omega},
                    {"center", f.center}, {"offset", f.offset}};
        case BranchFn::Kind::Flat: return {{"type", "flat"}, {"value", f.c0}};
    }
    return {};
}

static BranchFn fn_from_json(const json& j) {
    std::string t = j.at("type");
    if (t == "affine") return BranchFn::affine(j.at("c0"), j.at("c1"));
    if (t == "poly") return BranchFn::poly(j.at("coeffs").get<std::vector<double>>());
    if (t == "cubic")
        return BranchFn::cubic(j.at("x0"), j.at("y0"), j.at("m0"), j.at("x1"), j.at("y1"), j.at("m1"));
    if (t == "cosine") return BranchFn::cosine(j.at("amp"), j.at("omega"), j.at("center"), j.at("offset"));
    if (t == "flat") return BranchFn::flat(j.at("value"));
    throw config_error("unknown branch type '" + t + "'");
}

std::string map_to_json(const PiecewiseMap& map) {
    json j;
    const std::string& n = map.name();
    auto colon = n.find(':');
    std::string kind = colon == std::string::npos ? n : n.substr(0, colon);
    if (kind == "nfold" || kind == "skewed_tent" || kind == "logistic" || kind == "identity" ||
        kind == "counterexample") {
        j["kind"] = kind;
        if (colon != std::string::npos) j["params"] = {{"value", std::stod(n.substr(colon + 1))}};
        if (kind == "counterexample") j["params"] = json::parse(n.substr(colon + 1));
    } else {
        j["kind"] = "custom";
    }
    json bs = json::array();
    for (const auto& b : map.branches()) {
        json jb = fn_to_json(b.fn);
        jb["domain"] = {b.domain.lo, b.domain.hi};
        jb["r"] = b.smoothness_r;
        bs.push_back(jb);
    }
    j["branches"] = bs;
    j["lipschitz_L"] = map.lipschitz_L();
    json crit = json::array();
    for (const auto& c : map.critical_set())
        crit.push_back({{"lo", c.where.lo}, {"hi", c.where.hi}, {"numerical", c.numerical}});
    j["critical_set"] = crit;
    return j.dump(2);
}

PiecewiseMap map_from_json(const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("kind");
    if (kind == "nfold") return nfold(int(j.at("params").at("value").get<double>()));
    if (kind == "skewed_tent") return skewed_tent(j.at("params").at("value"));
    if (kind == "logistic") return logistic(j.at("params").at("value"));
    if (kind == "identity") return identity_map();
    if (kind == "custom" || kind == "counterexample") {
        // counterexample maps round-trip through their full branch list
        std::vector<Branch> bs;
        for (const auto& jb : j.at("branches")) {
            Branch b;
            b.domain = {jb.at("domain")[0], jb.at("domain")[1]};
            b.fn = fn_from_json(jb);
            b.smoothness_r = jb.value("r", 2.0);
            double da = b.fn.deriv(b.domain.lo + 1e-12 * (1 + std::abs(b.domain.lo)));
            double db = b.fn.deriv(b.domain.mid());
            b.monotonicity = (b.fn.kind == BranchFn::Kind::Cosine || b.fn.kind == BranchFn::Kind::Flat)
                                 ? Monotonicity::NonMonotone
                                 : (da + db >= 0 ? Monotonicity::Increasing : Monotonicity::Decreasing);
            bs.push_back(b);
        }
        std::vector<CriticalItem> crit;
        for (const auto& jc : j.value("critical_set", json::array()))
            crit.push_back({{jc.at("lo"), jc.at("hi")}, jc.value("numerical", false)});
        return PiecewiseMap(std::move(bs), std::move(crit), j.value("lipschitz_L", 1.0), kind);
    }
    throw config_error("unknown map kind '" + kind + "'");
}

} // namespace foldent
