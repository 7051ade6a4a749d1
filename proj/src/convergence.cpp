#include "ecdflab/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "ecdflab/ecdf.hpp"
#include "ecdflab/parallel.hpp"
#include "ecdflab/sample.hpp"

namespace ecdflab {

namespace {

constexpr std::int64_t max_trajectory_n = 10'000'000;

void require_ascending(const std::vector<std::int64_t>& ns, const char* what) {
    if (ns.empty()) {
        throw std::domain_error(std::string(what) + " must be nonempty");
    }
    if (ns.front() < 1) {
        throw std::domain_error(std::string(what) + " entries must be >= 1");
    }
    for (std::size_t i = 1; i < ns.size(); ++i) {
        if (ns[i] <= ns[i - 1]) {
            throw std::domain_error(std::string(what) + " must be strictly ascending");
        }
    }
}

double trial_sup_distance(const Distribution& model, std::int64_t n, const SeedSpec& seed,
                          std::uint64_t trial) {
    SeedSpec trial_seed{seed.master_seed, seed.stream_index + trial};
    Ecdf ecdf{draw_sample(model, n, trial_seed)};
    return sup_distance(ecdf, model).distance;
}

}  // namespace

Trajectory run_trajectory(const Distribution& model, const std::vector<std::int64_t>& checkpoint_ns,
                          const std::vector<double>& probes, const SeedSpec& seed) {
    require_ascending(checkpoint_ns, "trajectory: checkpoints");
    if (checkpoint_ns.back() > max_trajectory_n) {
        throw std::domain_error("trajectory: checkpoints must be <= 10^7");
    }
    for (double x : probes) {
        if (!std::isfinite(x)) {
            throw std::domain_error("trajectory: probes must be finite");
        }
    }

    const std::vector<double> stream = draw_stream(model, checkpoint_ns.back(), seed);
    Trajectory traj{model.spec(), seed, probes, {}};
    traj.checkpoints.reserve(checkpoint_ns.size());
    for (std::int64_t n : checkpoint_ns) {
        std::vector<double> prefix(stream.begin(), stream.begin() + n);
        Ecdf ecdf{Sample(std::move(prefix))};
        TrajectoryCheckpoint cp{n, sup_distance(ecdf, model).distance, {}};
        cp.probe_errors.reserve(probes.size());
        for (double x : probes) {
            cp.probe_errors.push_back(pointwise_error(ecdf, model, x));
        }
        traj.checkpoints.push_back(std::move(cp));
    }
    return traj;
}

PointwiseMoments pointwise_moments(const Distribution& model, double x, std::int64_t n,
                                   std::int64_t trials, const SeedSpec& seed, unsigned threads) {
    if (!std::isfinite(x)) {
        throw std::domain_error("pointwise: x must be finite");
    }
    if (n < 1) {
        throw std::domain_error("pointwise: n must be >= 1");
    }
    if (trials < 2) {
        throw std::domain_error("pointwise: trials must be >= 2 (variance undefined)");
    }

    std::vector<double> fhat(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](std::int64_t t) {
        SeedSpec trial_seed{seed.master_seed, seed.stream_index + static_cast<std::uint64_t>(t)};
        const std::vector<double> draws = draw_stream(model, n, trial_seed);
        std::int64_t count = 0;
        for (double v : draws) {
            if (v <= x) ++count;
        }
        fhat[static_cast<std::size_t>(t)] = static_cast<double>(count) / static_cast<double>(n);
    });

    // Fixed-order reduction keeps the result independent of thread count.
    double sum = 0.0;
    for (double v : fhat) sum += v;
    const double mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double v : fhat) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(trials - 1);
    return {mean, variance};
}

EscapeReport escape_probability(const Distribution& model, double epsilon, std::int64_t n,
                                std::int64_t trials, const SeedSpec& seed, unsigned threads) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("escape: eps must be > 0");
    }
    if (n < 1) {
        throw std::domain_error("escape: n must be >= 1");
    }
    if (trials < 1) {
        throw std::domain_error("escape: trials must be >= 1");
    }

    std::vector<char> escaped(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](std::int64_t t) {
        const double d = trial_sup_distance(model, n, seed, static_cast<std::uint64_t>(t));
        escaped[static_cast<std::size_t>(t)] = d >= epsilon ? 1 : 0;
    });

    std::int64_t count = 0;
    for (char e : escaped) count += e;
    const double fraction = static_cast<double>(count) / static_cast<double>(trials);
    const double stderr_ = std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(trials));
    return {epsilon, n, trials, fraction, stderr_};
}

std::optional<std::int64_t> entry_index(const Trajectory& trajectory, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("entry index: eps must be > 0");
    }
    const auto& cps = trajectory.checkpoints;
    if (cps.empty()) {
        throw std::domain_error("entry index: trajectory has no checkpoints");
    }
    // Last escaping checkpoint decides: everything after it stays inside.
    std::size_t i = cps.size();
    while (i > 0 && cps[i - 1].sup_distance < epsilon) {
        --i;
    }
    if (i == cps.size()) {
        return std::nullopt;  // final checkpoint escapes
    }
    return cps[i].n;
}

CertificateSchedule certificate_schedule(const Distribution& model, double eps_tilde, int m_max,
                                         std::int64_t trials, const std::vector<std::int64_t>& n_grid,
                                         const SeedSpec& seed, unsigned threads) {
    if (!(eps_tilde > 0.0)) {
        throw std::domain_error("certificate: eps-tilde must be > 0");
    }
    if (m_max < 1) {
        throw std::domain_error("certificate: m-max must be >= 1");
    }
    if (trials < 1) {
        throw std::domain_error("certificate: trials must be >= 1");
    }
    require_ascending(n_grid, "certificate: grid");

    // Sup distances per grid point, computed on demand and reused across
    // rows. Sharing the trial streams across rows makes escape fractions
    // monotone in eps exactly, which in turn makes n_m nondecreasing.
    std::vector<std::vector<double>> sups(n_grid.size());
    auto sups_at = [&](std::size_t g) -> const std::vector<double>& {
        if (sups[g].empty()) {
            sups[g].resize(static_cast<std::size_t>(trials));
            parallel_for(trials, threads, [&](std::int64_t t) {
                const std::uint64_t stream =
                    static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(trials) +
                    static_cast<std::uint64_t>(t);
                sups[g][static_cast<std::size_t>(t)] =
                    trial_sup_distance(model, n_grid[g], seed, stream);
            });
        }
        return sups[g];
    };
    auto escape_fraction = [&](std::size_t g, double eps) {
        const auto& d = sups_at(g);
        std::int64_t count = 0;
        for (double v : d) {
            if (v >= eps) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(trials);
    };

    CertificateSchedule schedule{eps_tilde, {}, 0.0};
    std::size_t g = 0;
    for (int m = 1; m <= m_max; ++m) {
        const double eps_m = 1.0 / static_cast<double>(m);
        const double budget = std::ldexp(eps_tilde, -m);
        bool found = false;
        for (; g < n_grid.size(); ++g) {
            const double est = escape_fraction(g, eps_m);
            if (est < budget) {
                schedule.rows.push_back({m, eps_m, n_grid[g], est, budget});
                found = true;
                break;
            }
        }
        if (!found) {
            throw GridInsufficientError(
                m, "certificate: grid-insufficient at m=" + std::to_string(m) +
                       " (no grid size kept the escape estimate below its budget)");
        }
    }
    schedule.total_budget = eps_tilde - std::ldexp(eps_tilde, -m_max);
    return schedule;
}

}  // namespace ecdflab
