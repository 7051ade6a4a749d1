#include "ecdflab/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecdflab {

Ecdf::Ecdf(const Sample& sample) : n_(sample.size()) {
    const auto& v = sample.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (points_.empty() || v[i] != points_.back()) {
            points_.push_back(v[i]);
            cum_counts_.push_back(static_cast<std::int64_t>(i) + 1);
        } else {
            cum_counts_.back() = static_cast<std::int64_t>(i) + 1;
        }
    }
}

std::int64_t Ecdf::count_le(double x) const {
    if (!std::isfinite(x)) {
        throw std::domain_error("ecdf: x must be finite");
    }
    auto it = std::upper_bound(points_.begin(), points_.end(), x);
    if (it == points_.begin()) return 0;
    return cum_counts_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

std::int64_t Ecdf::count_lt(double x) const {
    if (!std::isfinite(x)) {
        throw std::domain_error("ecdf: x must be finite");
    }
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it == points_.begin()) return 0;
    return cum_counts_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double Ecdf::operator()(double x) const {
    return static_cast<double>(count_le(x)) / static_cast<double>(n_);
}

const char* to_string(WitnessSide side) noexcept {
    return side == WitnessSide::at_point ? "at_point" : "left_limit";
}

namespace {

struct Best {
    double distance = -1.0;
    double witness_x = 0.0;
    WitnessSide side = WitnessSide::at_point;

    // Strict improvement only: scanning left to right with the left
    // limit offered first makes the witness deterministic and matches
    // the first location where the supremum is attained.
    void offer(double d, double x, WitnessSide s) {
        if (d > distance) {
            distance = d;
            witness_x = x;
            side = s;
        }
    }
};

SupDistanceResult sup_continuous(const Ecdf& ecdf, const Distribution& model) {
    const auto& points = ecdf.points();
    const auto& cum = ecdf.cum_counts();
    const double n = static_cast<double>(ecdf.size());
    Best best;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double f = model.cdf(points[i]);
        const double below = i == 0 ? 0.0 : static_cast<double>(cum[i - 1]) / n;
        const double at = static_cast<double>(cum[i]) / n;
        // Between steps the ECDF is flat while F climbs, so the gap on
        // each side of a step peaks at F(x) - F_hat(x-) and F_hat(x) - F(x).
        best.offer(f - below, points[i], WitnessSide::left_limit);
        best.offer(at - f, points[i], WitnessSide::at_point);
    }
    return {best.distance, best.witness_x, best.side};
}

SupDistanceResult sup_discrete(const Ecdf& ecdf, const Distribution& model) {
    // |F_hat - F| is constant between candidates and can jump only where
    // either function does, so atoms and sample points (both sides) carry
    // the supremum.
    std::vector<double> candidates;
    candidates.reserve(ecdf.points().size() + model.atoms().size());
    for (const Atom& a : model.atoms()) {
        candidates.push_back(a.value);
    }
    candidates.insert(candidates.end(), ecdf.points().begin(), ecdf.points().end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double n = static_cast<double>(ecdf.size());
    Best best;
    for (double x : candidates) {
        const double f_at = model.cdf(x);
        const double f_left = model.cdf_left(x);
        const double fh_at = static_cast<double>(ecdf.count_le(x)) / n;
        const double fh_left = static_cast<double>(ecdf.count_lt(x)) / n;
        best.offer(std::abs(fh_left - f_left), x, WitnessSide::left_limit);
        best.offer(std::abs(fh_at - f_at), x, WitnessSide::at_point);
    }
    return {best.distance, best.witness_x, best.side};
}

}  // namespace

SupDistanceResult sup_distance(const Ecdf& ecdf, const Distribution& model) {
    return model.is_discrete() ? sup_discrete(ecdf, model) : sup_continuous(ecdf, model);
}

double pointwise_error(const Ecdf& ecdf, const Distribution& model, double x) {
    return ecdf(x) - model.cdf(x);
}

}  // namespace ecdflab
