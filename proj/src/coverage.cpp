#include "ecdflab/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecdflab/parallel.hpp"

namespace ecdflab {

namespace {

void require_finite_x0(double x0) {
    if (!std::isfinite(x0)) {
        throw std::domain_error("coverage: x0 must be finite");
    }
}

void require_n(std::int64_t n) {
    if (n < 1) {
        throw std::domain_error("coverage: n must be >= 1");
    }
}

}  // namespace

Partition::Partition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.empty()) {
        throw std::domain_error("partition: needs at least one breakpoint");
    }
    for (double b : breakpoints_) {
        if (!std::isfinite(b)) {
            throw std::domain_error("partition: breakpoints must be finite");
        }
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) {
            throw std::domain_error("partition: breakpoints must be strictly ascending");
        }
    }
}

std::pair<double, double> Partition::cell_bounds(std::size_t k) const {
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = k == 0 ? -inf : breakpoints_[k - 1];
    const double hi = k == breakpoints_.size() ? inf : breakpoints_[k];
    return {lo, hi};
}

double atom_miss_probability(const Distribution& model, double x0, std::int64_t n) {
    require_finite_x0(x0);
    require_n(n);
    if (!model.is_discrete()) {
        throw std::domain_error("atom miss: model must be discrete");
    }
    const double f = model.atom_mass(x0);
    return std::pow(1.0 - f, static_cast<double>(n));
}

double range_miss_probability(const Distribution& model, double x0, std::int64_t n) {
    require_finite_x0(x0);
    require_n(n);
    if (model.is_discrete()) {
        throw std::domain_error("range miss: model must be continuous");
    }
    const double f = model.cdf(x0);
    return std::pow(1.0 - f, static_cast<double>(n)) + std::pow(f, static_cast<double>(n));
}

CoverageReport estimate_miss(const Distribution& model, double x0, std::int64_t n,
                             std::int64_t trials, const SeedSpec& seed, unsigned threads) {
    require_finite_x0(x0);
    require_n(n);
    if (trials < 1) {
        throw std::domain_error("coverage: trials must be >= 1");
    }

    const bool discrete = model.is_discrete();
    const double analytic =
        discrete ? atom_miss_probability(model, x0, n) : range_miss_probability(model, x0, n);

    std::vector<char> missed(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](std::int64_t t) {
        SeedSpec trial_seed{seed.master_seed, seed.stream_index + static_cast<std::uint64_t>(t)};
        const std::vector<double> draws = draw_stream(model, n, trial_seed);
        bool miss;
        if (discrete) {
            miss = std::none_of(draws.begin(), draws.end(), [x0](double v) { return v == x0; });
        } else {
            const auto [lo, hi] = std::minmax_element(draws.begin(), draws.end());
            // Covered range is (min, max]: left-open, right-closed.
            miss = !(x0 > *lo && x0 <= *hi);
        }
        missed[static_cast<std::size_t>(t)] = miss ? 1 : 0;
    });

    std::int64_t count = 0;
    for (char m : missed) count += m;
    const double estimate = static_cast<double>(count) / static_cast<double>(trials);
    const double se = std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
    return {x0, n, analytic, estimate, se, trials};
}

std::vector<TailRow> tail_speed_compare(const Distribution& model_a, const Distribution& model_b,
                                        double x0, const std::vector<std::int64_t>& n_list) {
    require_finite_x0(x0);
    if (model_a.is_discrete() || model_b.is_discrete()) {
        throw std::domain_error("tails: both models must be continuous");
    }
    if (n_list.empty()) {
        throw std::domain_error("tails: n list must be nonempty");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw std::domain_error("tails: n list must be ascending and >= 1");
        }
    }
    std::vector<TailRow> rows;
    rows.reserve(n_list.size());
    for (std::int64_t n : n_list) {
        rows.push_back({n, range_miss_probability(model_a, x0, n),
                        range_miss_probability(model_b, x0, n)});
    }
    return rows;
}

PartitionReport partition_report(const Distribution& model, const Sample& sample,
                                 const Partition& partition) {
    const auto& values = sample.values();
    const auto& breaks = partition.breakpoints();
    const std::int64_t n = sample.size();

    PartitionReport report{n, {}, {}, {}};
    report.counts.reserve(partition.cell_count());
    report.observed.reserve(partition.cell_count());
    report.theoretical.reserve(partition.cell_count());

    // Counts of observations <= b, then cells by difference; cell k is
    // (b_{k-1}, b_k].
    std::int64_t prev_count = 0;
    double prev_cdf = 0.0;
    for (double b : breaks) {
        const auto it = std::upper_bound(values.begin(), values.end(), b);
        const std::int64_t cum = static_cast<std::int64_t>(it - values.begin());
        report.counts.push_back(cum - prev_count);
        prev_count = cum;
        const double f = model.cdf(b);
        report.theoretical.push_back(f - prev_cdf);
        prev_cdf = f;
    }
    report.counts.push_back(n - prev_count);
    report.theoretical.push_back(1.0 - prev_cdf);
    for (std::int64_t c : report.counts) {
        report.observed.push_back(static_cast<double>(c) / static_cast<double>(n));
    }
    return report;
}

}  // namespace ecdflab
