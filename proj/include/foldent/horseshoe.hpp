#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "foldent/map.hpp"

namespace foldent {

// A coded invariant set: disjoint closed intervals each of whose images under
// f^return_time covers all of them. Two flavors:
//   - explicit interval family (the 2-branch base horseshoe, nfold cylinders),
//     with a nested-interval decoder and exact cylinder arithmetic;
//   - equal-width lap family inside one oscillation block (the Lambda_k systems),
//     where the symbol count 2M_k may exceed anything enumerable and is carried
//     in log form.
class HorseshoeSystem {
public:
    struct Piece {
        Interval iv;
        int branch = -1;     // map branch whose inverse decodes this symbol
        bool increasing = true;
    };

    static HorseshoeSystem full_shift(std::shared_ptr<const PiecewiseMap> map,
                                      std::vector<Piece> pieces, int return_time = 1);
    static HorseshoeSystem block_laps(std::shared_ptr<const PiecewiseMap> map, Interval block,
                                      double log_two_m, int return_time);

    int return_time() const { return return_time_; }
    bool enumerable() const { return nsym_ > 0; }
    std::uint64_t n_symbols() const;
    double log_n_symbols() const { return log_nsym_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const Interval& block() const { return block_; }
    const PiecewiseMap& map() const { return *map_; }
    std::shared_ptr<const PiecewiseMap> map_ptr() const { return map_; }
    bool is_block() const { return is_block_; }

    // Nested-interval decoder: the cylinder of a finite symbol word. For block
    // systems only depth 1 is resolved (lap interval); deeper structure is below
    // the sampler's resolution by construction.
    Interval decode(const std::vector<int>& symbols) const;
    double decode_point(const std::vector<int>& symbols) const { return decode(symbols).mid(); }

    // Optional weighted-sample generator for the uniform coded measure, installed
    // by the module that owns the system's dynamics (points, weights).
    std::function<void(int, std::uint64_t, std::vector<double>&, std::vector<double>&)> sampler;

private:
    std::shared_ptr<const PiecewiseMap> map_;
    std::vector<Piece> pieces_;
    Interval block_{0, 0};
    int return_time_ = 1;
    std::uint64_t nsym_ = 0;
    double log_nsym_ = 0.0;
    bool is_block_ = false;
};

// Markov/Bernoulli measure data on a coded system: empty prob vector = uniform.
struct CodedMeasure {
    std::shared_ptr<const HorseshoeSystem> system;
    std::vector<double> prob;

    double entropy_per_iterate() const;  // sum(-p log p) / return_time
    // CDF of the coded measure as a measure on [0,1] (explicit systems: exact
    // cylinder descent; block systems: lap-uniform within the block).
    double cdf(double x, double tol = 1e-14) const;
};

} // namespace foldent
