#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecdflab/distribution.hpp"
#include "ecdflab/rng.hpp"

namespace ecdflab {

struct TrajectoryCheckpoint {
    std::int64_t n;
    double sup_distance;
    std::vector<double> probe_errors;  // aligned with Trajectory::probes
};

// Sup distances along one growing sample path: every checkpoint is a
// prefix of the same stream.
struct Trajectory {
    std::string model_spec;
    SeedSpec seed;
    std::vector<double> probes;
    std::vector<TrajectoryCheckpoint> checkpoints;
};

struct PointwiseMoments {
    double mean;
    double variance;
};

struct EscapeReport {
    double epsilon;
    std::int64_t n;
    std::int64_t trials;
    double escape_fraction;  // #{trials with sup distance >= epsilon} / trials
    double standard_error;   // sqrt(p(1-p)/trials)
};

struct CertificateRow {
    int m;
    double eps_m;  // 1/m
    std::int64_t n_m;
    double estimated_escape;
    double budget;  // eps_tilde / 2^m
};

struct CertificateSchedule {
    double eps_tilde;
    std::vector<CertificateRow> rows;
    double total_budget;  // eps_tilde * (1 - 2^-m_max)
};

// The sample-size grid ran out before some row's escape estimate fell
// below its budget. Means the horizon is too short, not that anything is
// wrong with the estimates.
class GridInsufficientError : public std::runtime_error {
public:
    GridInsufficientError(int m, const std::string& message)
        : std::runtime_error(message), m_(m) {}
    int failing_m() const noexcept { return m_; }

private:
    int m_;
};

// Sup distance of the ECDF of the first n draws of one stream, for each
// checkpoint n. Checkpoints must be strictly ascending, max 10^7. When
// probes is nonempty each checkpoint also records F_hat(x) - F(x) per
// probe.
Trajectory run_trajectory(const Distribution& model, const std::vector<std::int64_t>& checkpoint_ns,
                          const std::vector<double>& probes, const SeedSpec& seed);

// Mean and (unbiased) variance across trials of F_hat_n(x). Trial t uses
// stream_index = seed.stream_index + t. trials >= 2.
PointwiseMoments pointwise_moments(const Distribution& model, double x, std::int64_t n,
                                   std::int64_t trials, const SeedSpec& seed, unsigned threads = 1);

// Fraction of independent trials whose sup distance at sample size n is
// >= epsilon. Trial t uses stream_index = seed.stream_index + t.
EscapeReport escape_probability(const Distribution& model, double epsilon, std::int64_t n,
                                std::int64_t trials, const SeedSpec& seed, unsigned threads = 1);

// Smallest checkpoint n such that every checkpoint from n on stays below
// epsilon; empty if the final checkpoint escapes.
std::optional<std::int64_t> entry_index(const Trajectory& trajectory, double epsilon);

// For each m = 1..m_max, the smallest n in n_grid whose estimated escape
// probability at eps_m = 1/m falls below eps_tilde/2^m. Grid point g,
// trial t uses stream_index = seed.stream_index + g*trials + t; rows
// share those sup values, so escape-set inclusion makes n_m nondecreasing
// in m exactly. Throws GridInsufficientError naming the failing m when
// the grid runs out.
CertificateSchedule certificate_schedule(const Distribution& model, double eps_tilde, int m_max,
                                         std::int64_t trials, const std::vector<std::int64_t>& n_grid,
                                         const SeedSpec& seed, unsigned threads = 1);

}  // namespace ecdflab
