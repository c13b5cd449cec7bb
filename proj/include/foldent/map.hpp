#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foldent/errors.hpp"
#include "foldent/interval.hpp"

namespace foldent {

enum class Monotonicity { Increasing, Decreasing, NonMonotone };

// Branch function families. The descriptor algebra is fixed: affine, polynomial,
// cubic Hermite segments, cosine oscillation blocks and flat pieces. Every family
// evaluates itself and its first derivative in closed form.
struct BranchFn {
    enum class Kind { Affine, Poly, Cubic, Cosine, Flat } kind = Kind::Affine;

    // Affine: c0 + c1*x.  Poly: coeffs[i] x^i.
    // Cubic: Hermite data on [x0,x1] with values y0,y1 and slopes m0,m1.
    // Cosine: amp*cos(omega*(x-center)) + offset.
    // Flat:  c0 (derivative identically zero; stands in for oscillation blocks
    //        whose amplitude is below double resolution).
    double c0 = 0, c1 = 0;
    std::vector<double> coeffs;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 0, m0 = 0, m1 = 0;
    double amp = 0, omega = 0, center = 0, offset = 0;

    double eval(double x) const;
    double deriv(double x) const;
    double second_deriv(double x) const;

    static BranchFn affine(double c0, double c1);
    static BranchFn poly(std::vector<double> coeffs);
    static BranchFn cubic(double x0, double y0, double m0, double x1, double y1, double m1);
    static BranchFn cosine(double amp, double omega, double center, double offset);
    static BranchFn flat(double value);
};

struct Branch {
    Interval domain;                 // half-open [lo, hi)
    BranchFn fn;
    Monotonicity monotonicity = Monotonicity::Increasing;
    double smoothness_r = 2.0;       // claimed C^r class

    double eval(double x) const { return fn.eval(x); }
    double deriv(double x) const { return fn.deriv(x); }

    // Image interval of the closed domain (exact for monotone, sampled hull otherwise).
    Interval image() const;

    // Interior points where f' = 0, in ascending order (analytic where the family
    // permits, otherwise sign-change detection on a probe grid).
    std::vector<double> interior_critical_points() const;
};

struct CriticalItem {
    Interval where;          // degenerate point (lo==hi) or a whole interval
    bool numerical = false;  // detected numerically rather than supplied analytically
};

class PiecewiseMap {
public:
    PiecewiseMap() = default;
    PiecewiseMap(std::vector<Branch> branches, std::vector<CriticalItem> critical,
                 double lipschitz, std::string name);

    double eval(double x) const;
    double deriv(double x) const;
    const Branch& branch_at(double x) const;
    int branch_index_at(double x) const;

    std::vector<double> orbit(double x0, int n) const;

    // One root per monotone piece whose image contains y, ascending, paired with
    // the owning branch index. |f(x*) - y| <= tol.
    std::vector<std::pair<double, int>> preimages(double y, double tol = 1e-11) const;

    // Conservative approximation of {x : |f'(x)| < eps} as an interval union.
    IntervalSet sublevel_set(double eps) const;

    const std::vector<Branch>& branches() const { return branches_; }
    const std::vector<CriticalItem>& critical_set() const { return critical_; }
    double lipschitz_L() const { return lipschitz_; }
    const std::string& name() const { return name_; }

    // Monotone pieces (branches split at interior critical points), cached.
    struct MonotonePiece {
        Interval domain;
        int branch = 0;
        bool increasing = true;
        Interval image;  // exact endpoint image (closed)
    };
    const std::vector<MonotonePiece>& monotone_pieces() const;

    // Forward image of an interval as a union of intervals, computed lap by lap.
    IntervalSet image_of(const Interval& iv) const;

private:
    std::vector<Branch> branches_;
    std::vector<CriticalItem> critical_;
    double lipschitz_ = 1.0;
    std::string name_;
    mutable std::vector<MonotonePiece> pieces_;  // lazy cache
};

// Built-in constructors.
PiecewiseMap nfold(int N);
PiecewiseMap skewed_tent(double p);
PiecewiseMap logistic(double c);
PiecewiseMap identity_map();

// JSON (de)serialization of map specifications.
std::string map_to_json(const PiecewiseMap& map);
PiecewiseMap map_from_json(const std::string& json_text);

} // namespace foldent
