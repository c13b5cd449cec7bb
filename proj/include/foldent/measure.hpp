#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "foldent/horseshoe.hpp"
#include "foldent/interval.hpp"
#include "foldent/map.hpp"

namespace foldent {

// Log-type integrands are clamped below at this level; keeps degenerate-rate
// integrals finite while staying far below any value seen at desk scale.
inline constexpr double kLogClamp = -1e3;

struct BallSpec {
    double center = 0.5;
    double radius = 0.1;
    int bowen_depth = 1;  // 1 = metric ball, n > 1 = Bowen ball B_n(x, delta)
};

struct IntegrateStats {
    long clamped = 0;        // integrand evaluations hit the clamp
    long degenerate = 0;     // |f'| below 1e-9 at a needed preimage etc.
    std::string note;
};

// A Borel probability measure on [0,1] in one of four concrete representations.
class MeasureRep {
public:
    enum class Kind { Empirical, Density, Atomic, CodedMarkov };

    static MeasureRep empirical(std::vector<double> points, std::vector<double> weights = {});
    static MeasureRep density(std::vector<double> heights);
    static MeasureRep lebesgue(int grid_n = 1 << 16);
    static MeasureRep atomic(std::vector<std::pair<double, double>> atoms);
    static MeasureRep coded(std::shared_ptr<const HorseshoeSystem> sys, std::vector<double> prob);

    Kind kind() const { return kind_; }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& heights() const { return heights_; }
    int grid_n() const { return int(heights_.size()); }
    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    const CodedMeasure& coded_data() const { return coded_; }

    // mu([0, x))
    double cdf_left(double x) const;
    // mu([lo, hi))
    double mass(const Interval& iv) const { return cdf_left(iv.hi) - cdf_left(iv.lo); }
    double total_mass() const;

    // Deterministic empirical stand-in used for coded block systems (cached).
    const MeasureRep& approximant(int samples = 1 << 14, std::uint64_t seed = 9001) const;

    std::string to_json() const;
    std::string to_csv() const;
    static MeasureRep from_json(const std::string& text);

private:
    Kind kind_ = Kind::Density;
    std::vector<double> points_, weights_;       // Empirical (points sorted, ties merged)
    std::vector<double> heights_;                // Density on uniform grid
    mutable std::vector<double> cdf_cache_;
    std::vector<std::pair<double, double>> atoms_;  // Atomic, sorted
    CodedMeasure coded_;
    mutable std::shared_ptr<MeasureRep> approx_;
};

// Core operations --------------------------------------------------------

double integrate(const MeasureRep& mu, const std::function<double(double)>& phi,
                 IntegrateStats* stats = nullptr);

// Integral restricted to an interval union (exact interval splitting).
double integrate_over(const MeasureRep& mu, const std::function<double(double)>& phi,
                      const IntervalSet& domain, IntegrateStats* stats = nullptr);

MeasureRep pushforward(const MeasureRep& mu, const PiecewiseMap& map,
                       IntegrateStats* stats = nullptr);

double ball_mass(const MeasureRep& mu, const BallSpec& ball, const PiecewiseMap* map = nullptr);

// Bowen-ball masses for n = 1..n_max around center x (shared co-evolution sweep).
std::vector<double> bowen_masses(const MeasureRep& mu, const PiecewiseMap& map, double x,
                                 double delta, int n_max,
                                 const std::function<double(double)>* radius_fn = nullptr);

double w1_distance(const MeasureRep& mu, const MeasureRep& nu);

MeasureRep birkhoff_measure(const PiecewiseMap& map, double x0, long burn_in, long n);

// Grid projection of any measure onto a dyadic Density grid.
MeasureRep project_to_density(const MeasureRep& mu, int grid_n = 1 << 16);

// Bernoulli(p0..pk) measure coded on the full-branch cylinder structure of map
// (each branch must map its domain onto [0,1)).
MeasureRep bernoulli_on_map(std::shared_ptr<const PiecewiseMap> map, std::vector<double> prob);

// Deterministic sample path of the coded Bernoulli process (orbit positions).
std::vector<double> coded_sample_path(const CodedMeasure& cm, long n, std::uint64_t seed);

} // namespace foldent
