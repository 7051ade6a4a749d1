// Acceptance suite: one self-contained check per shipped guarantee, each
// printing a single PASS/FAIL line. Run with no arguments for the whole
// suite, --only N for one criterion, --cli PATH to point criterion 9 at
// the installed command-line binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ecdflab/cli.hpp"
#include "ecdflab/convergence.hpp"
#include "ecdflab/coverage.hpp"
#include "ecdflab/distribution.hpp"
#include "ecdflab/ecdf.hpp"
#include "ecdflab/sample.hpp"
#include "test_support.hpp"

using namespace ecdflab;

namespace {

struct Criterion {
    int id;
    std::string label;
    std::function<bool(std::string&)> check;  // fills a detail message
};

std::string g_cli_path;

bool expect(bool ok, const std::string& what, std::string& detail) {
    if (!ok) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
    return ok;
}

// 1. ECDF evaluation equals the naive counting definition, exactly.
bool criterion_ecdf_oracle(std::string& detail) {
    SplitMix64 gen(SeedSpec{1001, 0});
    bool ok = true;
    for (int rep = 0; rep < 1000 && ok; ++rep) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(gen.next_u64() % 20);
        std::vector<double> values;
        for (std::int64_t i = 0; i < n; ++i) {
            values.push_back(std::floor(testsupport::uniform_in(gen, -10.0, 10.0) * 8.0) / 8.0);
        }
        const Ecdf e{Sample(values)};
        for (int probe = 0; probe < 100 && ok; ++probe) {
            const double x = probe % 4 == 0 ? values[gen.next_u64() % values.size()]
                                            : testsupport::uniform_in(gen, -12.0, 12.0);
            ok = expect(e(x) == testsupport::naive_ecdf(values, x),
                        "mismatch vs naive counting at x=" + std::to_string(x), detail);
        }
    }
    if (ok) detail = "1000 samples (n <= 20) x 100 probes, all exact";
    return ok;
}

// 2. Sup distance equals the dense-grid brute force.
bool criterion_sup_oracle(std::string& detail) {
    SplitMix64 gen(SeedSpec{2002, 0});
    bool ok = true;
    int continuous_cases = 0, discrete_cases = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 200 && ok; ++rep) {
        const auto c = testsupport::random_case(gen, 400);
        const double d = sup_distance(Ecdf{Sample(c.values)}, c.model).distance;
        if (c.model.is_discrete()) {
            ++discrete_cases;
            ok = expect(d == testsupport::sup_oracle_discrete(c.values, c.model),
                        "discrete case diverged from the candidate-set oracle", detail);
        } else {
            ++continuous_cases;
            const double gap = std::abs(d - testsupport::sup_oracle_continuous(c.values, c.model));
            worst = std::max(worst, gap);
            ok = expect(gap <= 1e-9, "continuous case off the grid oracle by " + std::to_string(gap),
                        detail);
        }
    }
    if (ok) {
        std::ostringstream msg;
        msg << continuous_cases << " continuous cases within 1e-9 (worst gap " << worst << "), "
            << discrete_cases << " discrete cases exact";
        detail = msg.str();
    }
    return ok;
}

// 3. Mean and variance of F_hat_n(x) across trials sit on the binomial
// identities at five quantile probes per family.
bool criterion_moments(std::string& detail) {
    std::vector<Distribution> models;
    models.push_back(Distribution::uniform(-1.5, 2.5));
    models.push_back(Distribution::exponential(1.3));
    models.push_back(Distribution::pareto(1.0, 2.5));
    models.push_back(Distribution::bernoulli(0.3));
    models.push_back(Distribution::finite_discrete({{-1.0, 0.2}, {0.0, 0.3}, {2.0, 0.5}}));

    const std::int64_t n = 100, trials = 2000;
    bool ok = true;
    std::uint64_t stream = 0;
    for (const auto& model : models) {
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double x = model.quantile(p);
            const double f = model.cdf(x);
            const PointwiseMoments m =
                pointwise_moments(model, x, n, trials, SeedSpec{3003, stream}, 4);
            stream += static_cast<std::uint64_t>(trials);
            const double mean_band =
                3.0 * std::sqrt(f * (1.0 - f) / static_cast<double>(n * trials));
            const double var_target = f * (1.0 - f) / static_cast<double>(n);
            ok &= expect(std::abs(m.mean - f) <= mean_band,
                         model.spec() + " mean off at p=" + std::to_string(p), detail);
            ok &= expect(std::abs(m.variance - var_target) <= 0.15 * var_target,
                         model.spec() + " variance off at p=" + std::to_string(p), detail);
        }
    }
    if (ok) detail = "5 families x 5 quantile probes: mean within 3 SE, variance within 15%";
    return ok;
}

// 4. Median sup distance decays like n^{-1/2} over 200 uniform paths.
bool criterion_decay(std::string& detail) {
    std::vector<double> at100, at1600;
    const Distribution u = Distribution::uniform(0, 1);
    for (int t = 0; t < 200; ++t) {
        const Trajectory traj =
            run_trajectory(u, {100, 400, 1600}, {}, SeedSpec{4004, static_cast<std::uint64_t>(t)});
        at100.push_back(traj.checkpoints[0].sup_distance);
        at1600.push_back(traj.checkpoints[2].sup_distance);
    }
    const double ratio = testsupport::median(at1600) / testsupport::median(at100);
    std::ostringstream msg;
    msg << "median(1600)/median(100) = " << ratio << ", required [0.2, 0.35]";
    detail = msg.str();
    return ratio >= 0.2 && ratio <= 0.35;
}

// 5. Escape fractions collapse with n and respect the concentration bound.
bool criterion_escape(std::string& detail) {
    const Distribution u = Distribution::uniform(0, 1);
    const EscapeReport small = escape_probability(u, 0.05, 200, 500, SeedSpec{5005, 0}, 4);
    const EscapeReport large = escape_probability(u, 0.05, 2000, 500, SeedSpec{5005, 1000}, 4);
    const double dkw = 2.0 * std::exp(-2.0 * 2000 * 0.05 * 0.05);
    std::ostringstream msg;
    msg << "escape(200) = " << small.escape_fraction << ", escape(2000) = " << large.escape_fraction
        << " (concentration bound ~ " << dkw << ")";
    detail = msg.str();
    return small.escape_fraction > large.escape_fraction && large.escape_fraction < 0.05;
}

// 6. Certificate rows meet their eps~/2^m budgets with nondecreasing n_m.
bool criterion_certificate(std::string& detail) {
    const Distribution u = Distribution::uniform(0, 1);
    const std::vector<std::int64_t> grid{100, 1000, 10000, 100000};
    const CertificateSchedule s = certificate_schedule(u, 0.1, 3, 200, grid, SeedSpec{6006, 0}, 4);
    bool ok = expect(s.rows.size() == 3, "expected 3 rows", detail);
    for (std::size_t i = 0; i < s.rows.size() && ok; ++i) {
        const auto& row = s.rows[i];
        ok &= expect(row.estimated_escape < row.budget,
                     "row m=" + std::to_string(row.m) + " exceeds its budget", detail);
        if (i > 0) {
            ok &= expect(row.n_m >= s.rows[i - 1].n_m, "n_m decreased", detail);
        }
        const EscapeReport fresh =
            escape_probability(u, row.eps_m, row.n_m, 200, SeedSpec{6607, i * 1000}, 4);
        ok &= expect(fresh.escape_fraction < 2.0 * row.budget,
                     "fresh-seed re-verification exceeded 2x budget at m=" + std::to_string(row.m),
                     detail);
    }
    ok &= expect(s.total_budget == 0.1 * (1.0 - std::exp2(-3.0)),
                 "total budget does not equal eps~*(1 - 2^-3)", detail);
    ok &= expect(std::abs(s.total_budget - 0.0875) <= 1e-16,
                 "total budget not 0.0875 to within an ulp", detail);
    if (ok) {
        std::ostringstream msg;
        msg << "n_m = {" << s.rows[0].n_m << ", " << s.rows[1].n_m << ", " << s.rows[2].n_m
            << "}, total budget " << s.total_budget;
        detail = msg.str();
    }
    return ok;
}

// 7. Closed-form miss probabilities, their Monte Carlo counterparts, and
// the distribution-free quantile identity.
bool criterion_coverage_formulas(std::string& detail) {
    bool ok = true;

    const Distribution bern = Distribution::bernoulli(0.5);
    ok &= expect(atom_miss_probability(bern, 1.0, 2) == 0.25, "atom miss (f=0.5, n=2) != 0.25", detail);
    const Distribution u = Distribution::uniform(0, 1);
    ok &= expect(range_miss_probability(u, 0.5, 2) == 0.5, "range miss (F=0.5, n=2) != 0.5", detail);
    ok &= expect(range_miss_probability(u, 0.5, 1) == 1.0, "range miss (F=0.5, n=1) != 1.0", detail);

    const auto mc_close = [&](const CoverageReport& r) {
        return std::abs(*r.mc_estimate - r.analytic_miss) <= 4.0 * std::max(*r.mc_stderr, 1e-12);
    };
    ok &= expect(mc_close(estimate_miss(bern, 1.0, 2, 10000, SeedSpec{7007, 0}, 4)),
                 "MC atom miss off by more than 4 SE", detail);
    ok &= expect(mc_close(estimate_miss(u, 0.5, 2, 10000, SeedSpec{7007, 20000}, 4)),
                 "MC range miss (n=2) off by more than 4 SE", detail);
    ok &= expect(mc_close(estimate_miss(u, 0.5, 1, 10000, SeedSpec{7007, 40000}, 4)),
                 "MC range miss (n=1) off by more than 4 SE", detail);

    std::vector<Distribution> families;
    families.push_back(Distribution::uniform(0, 1));
    families.push_back(Distribution::uniform(-4.0, 7.5));
    families.push_back(Distribution::exponential(1.0));
    families.push_back(Distribution::exponential(0.3));
    families.push_back(Distribution::pareto(1.0, 1.1));
    families.push_back(Distribution::pareto(2.0, 3.5));
    for (const auto& model : families) {
        for (double p : {0.1, 0.25, 0.5, 0.9}) {
            for (std::int64_t n : {1, 2, 5, 10}) {
                const double expected =
                    std::pow(1.0 - p, static_cast<double>(n)) + std::pow(p, static_cast<double>(n));
                ok &= expect(
                    std::abs(range_miss_probability(model, model.quantile(p), n) - expected) <= 1e-12,
                    model.spec() + ": quantile identity broken at p=" + std::to_string(p), detail);
            }
        }
    }
    if (ok) detail = "closed forms exact, MC within 4 SE, quantile identity within 1e-12";
    return ok;
}

// 8. Tail-speed direction at a fixed far point.
bool criterion_tails(std::string& detail) {
    const auto rows = tail_speed_compare(Distribution::pareto(1.0, 1.1),
                                         Distribution::exponential(1.0), 50.0, {10, 100, 1000});
    bool ok = true;
    std::ostringstream msg;
    for (const auto& row : rows) {
        msg << "n=" << row.n << ": pareto " << row.miss_a << " vs exp " << row.miss_b << "; ";
        ok &= row.miss_a > row.miss_b;
    }
    msg << (ok ? "pareto strictly larger at every n"
               : "required: pareto miss strictly larger at every n");
    detail = msg.str();
    return ok;
}

// 9. Byte-identical reruns, in process and through the installed binary,
// and independence from the thread count.
bool criterion_determinism(std::string& detail) {
    bool ok = true;

    const auto run_once = [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"ecdflab"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = run_cli(argv, out, err);
        return std::make_pair(code, out.str());
    };

    const std::vector<std::vector<std::string>> commands = {
        {"sample", "--model", "pareto:1,2", "--n", "500", "--seed", "99"},
        {"trajectory", "--model", "uniform:0,1", "--checkpoints", "100,400", "--probes", "0.5",
         "--seed", "12"},
        {"escape", "--model", "uniform:0,1", "--eps", "0.05", "--n", "200,400", "--trials", "64",
         "--seed", "13"},
        {"certificate", "--model", "uniform:0,1", "--eps-tilde", "0.1", "--m-max", "2", "--trials",
         "50", "--grid", "100,1000", "--seed", "14"},
        {"coverage", "--model", "exp:1", "--x0", "1.0", "--n", "2,8", "--trials", "500", "--seed",
         "15"},
        {"pointwise", "--model", "bern:0.5", "--x", "0", "--n", "50", "--trials", "200", "--seed",
         "16"},
    };
    for (const auto& cmd : commands) {
        const auto a = run_once(cmd);
        const auto b = run_once(cmd);
        ok &= expect(a.first == 0 && a.second == b.second,
                     "rerun of '" + cmd[0] + "' differed in process", detail);
    }

    // Thread count must not leak into the bytes.
    const auto with_threads = [&](const std::string& t) {
        return run_once({"escape", "--model", "uniform:0,1", "--eps", "0.05", "--n", "300",
                         "--trials", "96", "--seed", "17", "--threads", t});
    };
    ok &= expect(with_threads("1").second == with_threads("8").second,
                 "--threads 1 vs --threads 8 changed escape output", detail);
    const auto cert_threads = [&](const std::string& t) {
        return run_once({"certificate", "--model", "uniform:0,1", "--eps-tilde", "0.1", "--m-max",
                         "3", "--trials", "64", "--grid", "100,1000,10000", "--seed", "18",
                         "--threads", t});
    };
    ok &= expect(cert_threads("1").second == cert_threads("8").second,
                 "--threads 1 vs --threads 8 changed certificate output", detail);

    // The installed binary, rerun with identical flags, must produce
    // byte-identical files.
    if (!g_cli_path.empty() && std::filesystem::exists(g_cli_path)) {
        const auto tmp = std::filesystem::temp_directory_path();
        const auto f1 = tmp / "ecdflab_accept_a.csv";
        const auto f2 = tmp / "ecdflab_accept_b.csv";
        const std::string base = "\"" + g_cli_path +
                                 "\" escape --model uniform:0,1 --eps 0.05 --n 200 --trials 48"
                                 " --seed 19 --output ";
        const int rc1 = std::system((base + f1.string()).c_str());
        const int rc2 = std::system((base + f2.string()).c_str());
        ok &= expect(rc1 == 0 && rc2 == 0, "binary invocation failed", detail);
        const auto slurp = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            return buf.str();
        };
        const std::string out1 = slurp(f1);
        ok &= expect(!out1.empty() && out1 == slurp(f2), "binary reruns produced different bytes",
                     detail);
        std::filesystem::remove(f1);
        std::filesystem::remove(f2);
    } else {
        ok &= expect(false, "CLI binary path not provided (--cli)", detail);
    }

    if (ok) detail = "6 commands rerun byte-identical; threads 1 vs 8 identical; binary reruns identical";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (arg == "--cli" && i + 1 < argc) {
            g_cli_path = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only N] [--cli PATH]\n";
            return 2;
        }
    }

    const std::vector<std::pair<Criterion, double>> criteria = {
        {{1, "ecdf equals naive counting", criterion_ecdf_oracle}, 5.0},
        {{2, "sup distance equals the brute-force oracle", criterion_sup_oracle}, 60.0},
        {{3, "pointwise mean/variance identities", criterion_moments}, 120.0},
        {{4, "uniform convergence decay rate", criterion_decay}, 120.0},
        {{5, "escape fraction collapse", criterion_escape}, 0.0},
        {{6, "certificate schedule budgets", criterion_certificate}, 0.0},
        {{7, "coverage formulas and Monte Carlo", criterion_coverage_formulas}, 0.0},
        {{8, "tail-speed comparison", criterion_tails}, 0.0},
        {{9, "byte-identical determinism", criterion_determinism}, 0.0},
    };

    int failures = 0;
    for (const auto& [criterion, limit] : criteria) {
        if (only != 0 && criterion.id != only) {
            continue;
        }
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit > 0.0 && seconds >= limit) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("runtime limit ") +
                      std::to_string(limit) + "s exceeded";
        }
        std::printf("%s  criterion %d: %s [%.2fs]%s%s\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.label.c_str(), seconds, detail.empty() ? "" : " -- ",
                    detail.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
