#pragma once

#include <cstdint>
#include <vector>

#include "ecdflab/distribution.hpp"
#include "ecdflab/sample.hpp"

namespace ecdflab {

// The right-continuous step function x -> #{i : x_i <= x} / n. Ties are
// collapsed into single steps with multiplicity. Cumulative counts are
// kept as integers; division by n happens only at evaluation, so every
// value is exactly k/n.
class Ecdf {
public:
    explicit Ecdf(const Sample& sample);

    double operator()(double x) const;      // F_hat(x)
    std::int64_t count_le(double x) const;  // #{i : x_i <= x}
    std::int64_t count_lt(double x) const;  // #{i : x_i < x}

    std::int64_t size() const noexcept { return n_; }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<std::int64_t>& cum_counts() const noexcept { return cum_counts_; }

private:
    std::vector<double> points_;            // distinct values, ascending
    std::vector<std::int64_t> cum_counts_;  // counts of values <= points_[i]
    std::int64_t n_;
};

enum class WitnessSide { at_point, left_limit };

const char* to_string(WitnessSide side) noexcept;

// sup_x |F_hat(x) - F(x)| together with where it is attained. With
// left_limit the distance is |F_hat(x-) - F(x-)|, both sides taken as
// left limits; they are computed analytically, never by nudging x.
struct SupDistanceResult {
    double distance;
    double witness_x;
    WitnessSide side;
};

// Exact supremum over the whole real line. Continuous laws: maximum over
// the distinct sample points of the at-point and left-limit gaps.
// Discrete laws: maximum over the union of model atoms and sample points,
// both sides evaluated at each candidate.
SupDistanceResult sup_distance(const Ecdf& ecdf, const Distribution& model);

// F_hat(x) - F(x), in [-1, 1].
double pointwise_error(const Ecdf& ecdf, const Distribution& model, double x);

}  // namespace ecdflab
