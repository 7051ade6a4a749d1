#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ecdflab/distribution.hpp"
#include "ecdflab/ecdf.hpp"
#include "ecdflab/rng.hpp"
#include "ecdflab/sample.hpp"

namespace ecdflab {

struct CoverageReport {
    double x0;
    std::int64_t n;
    double analytic_miss;
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
    std::optional<std::int64_t> trials;
};

// Cells I_1 = (-inf, b_1], ..., I_m = (b_{m-1}, +inf) from strictly
// ascending finite breakpoints. Right-closed to match CDF right
// continuity.
class Partition {
public:
    explicit Partition(std::vector<double> breakpoints);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    std::size_t cell_count() const noexcept { return breakpoints_.size() + 1; }
    // (low, high] bounds of cell k; the outer bounds are +-infinity.
    std::pair<double, double> cell_bounds(std::size_t k) const;

private:
    std::vector<double> breakpoints_;
};

struct PartitionReport {
    std::int64_t n;
    std::vector<std::int64_t> counts;  // per cell, sums to n
    std::vector<double> observed;      // counts[k] / n
    std::vector<double> theoretical;   // F(b_k) - F(b_{k-1})
};

// P(x0 not in a size-n sample) = (1 - f(x0))^n for a discrete law, where
// f(x0) is the atom mass at x0 (zero if x0 is not an atom).
double atom_miss_probability(const Distribution& model, double x0, std::int64_t n);

// P(x0 outside (X_(1), X_(n)]) = (1 - F(x0))^n + F(x0)^n for a
// continuous law.
double range_miss_probability(const Distribution& model, double x0, std::int64_t n);

// Monte Carlo estimate of the relevant miss event (atom membership for
// discrete laws, membership in (min, max] for continuous ones), bundled
// with the analytic value. Trial t uses stream_index =
// seed.stream_index + t.
CoverageReport estimate_miss(const Distribution& model, double x0, std::int64_t n,
                             std::int64_t trials, const SeedSpec& seed, unsigned threads = 1);

struct TailRow {
    std::int64_t n;
    double miss_a;
    double miss_b;
};

// Analytic range-miss values for two continuous laws at the same x0, one
// row per ascending sample size. Table only; no comparison encoded.
std::vector<TailRow> tail_speed_compare(const Distribution& model_a, const Distribution& model_b,
                                        double x0, const std::vector<std::int64_t>& n_list);

// Exact per-cell counts of the sample, observed proportions, and the
// law's cell probabilities.
PartitionReport partition_report(const Distribution& model, const Sample& sample,
                                 const Partition& partition);

}  // namespace ecdflab
