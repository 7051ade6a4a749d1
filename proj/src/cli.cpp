#include "ecdflab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecdflab/convergence.hpp"
#include "ecdflab/coverage.hpp"
#include "ecdflab/distribution.hpp"
#include "ecdflab/ecdf.hpp"
#include "ecdflab/format.hpp"
#include "ecdflab/sample.hpp"

namespace ecdflab {

namespace {

using ordered_json = nlohmann::ordered_json;

struct OutputSpec {
    std::string format = "csv";
    std::string path;

    bool json() const { return format == "json"; }
};

void add_output_flags(CLI::App* cmd, OutputSpec& spec) {
    cmd->add_option("--format", spec.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", spec.path, "Write results to this file instead of stdout");
}

struct SeedFlags {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    SeedSpec spec() const { return SeedSpec{master, stream}; }
};

void add_seed_flags(CLI::App* cmd, SeedFlags& seed, bool required) {
    auto* opt = cmd->add_option("--seed", seed.master, "Master seed (64-bit unsigned)");
    if (required) {
        opt->required();
    }
    cmd->add_option("--stream", seed.stream, "Base stream index")->capture_default_str();
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

std::string bound_text(double b) {
    return format_double(b);  // to_chars spells the infinities as inf/-inf
}

ordered_json json_bound(double b) {
    if (std::isfinite(b)) {
        return b;
    }
    return bound_text(b);
}

std::string finish_json(const ordered_json& j) { return j.dump() + "\n"; }

// ---- per-command handlers, each returning the full output payload ----

std::string run_sample(const Distribution& model, std::int64_t n, const SeedSpec& seed,
                       const OutputSpec& out) {
    const Sample sample = draw_sample(model, n, seed);
    if (out.json()) {
        ordered_json j;
        j["values"] = sample.values();
        return finish_json(j);
    }
    std::string payload;
    for (double v : sample.values()) {
        payload += format_double(v);
        payload += '\n';
    }
    return payload;
}

std::string run_ecdf_eval(const Sample& sample, const std::vector<double>& xs,
                          const OutputSpec& out) {
    const Ecdf ecdf(sample);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (double x : xs) {
            rows.push_back({{"x", x}, {"ecdf", ecdf(x)}});
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "x,ecdf\n";
    for (double x : xs) {
        payload += csv_line({format_double(x), format_double(ecdf(x))});
    }
    return payload;
}

std::string run_ks(const Distribution& model, const Sample& sample, const OutputSpec& out) {
    const SupDistanceResult r = sup_distance(Ecdf(sample), model);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        rows.push_back({{"distance", r.distance},
                        {"witness_x", r.witness_x},
                        {"side", to_string(r.side)}});
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "distance,witness_x,side\n";
    payload += csv_line({format_double(r.distance), format_double(r.witness_x), to_string(r.side)});
    return payload;
}

std::string run_trajectory_cmd(const Distribution& model, const std::vector<std::int64_t>& checkpoints,
                               const std::vector<double>& probes, const SeedSpec& seed,
                               const OutputSpec& out) {
    const Trajectory traj = run_trajectory(model, checkpoints, probes, seed);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (const auto& cp : traj.checkpoints) {
            ordered_json row{{"n", cp.n}, {"sup_distance", cp.sup_distance}};
            if (!traj.probes.empty()) {
                ordered_json ps = ordered_json::array();
                for (std::size_t i = 0; i < traj.probes.size(); ++i) {
                    ps.push_back({{"probe_x", traj.probes[i]}, {"error", cp.probe_errors[i]}});
                }
                row["probes"] = ps;
            }
            rows.push_back(row);
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string header = "n,sup_distance";
    for (std::size_t i = 0; i < probes.size(); ++i) {
        header += ",probe_x,error";
    }
    std::string payload = header + "\n";
    for (const auto& cp : traj.checkpoints) {
        std::vector<std::string> fields{format_int(cp.n), format_double(cp.sup_distance)};
        for (std::size_t i = 0; i < traj.probes.size(); ++i) {
            fields.push_back(format_double(traj.probes[i]));
            fields.push_back(format_double(cp.probe_errors[i]));
        }
        payload += csv_line(fields);
    }
    return payload;
}

std::string run_escape(const Distribution& model, double eps, const std::vector<std::int64_t>& ns,
                       std::int64_t trials, const SeedSpec& seed, unsigned threads,
                       const OutputSpec& out) {
    std::vector<EscapeReport> reports;
    reports.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        // Disjoint trial block per n.
        SeedSpec block{seed.master_seed,
                       seed.stream_index + static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(trials)};
        reports.push_back(escape_probability(model, eps, ns[i], trials, block, threads));
    }
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : reports) {
            rows.push_back({{"epsilon", r.epsilon},
                            {"n", r.n},
                            {"trials", r.trials},
                            {"escape_fraction", r.escape_fraction},
                            {"stderr", r.standard_error}});
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "epsilon,n,trials,escape_fraction,stderr\n";
    for (const auto& r : reports) {
        payload += csv_line({format_double(r.epsilon), format_int(r.n), format_int(r.trials),
                             format_double(r.escape_fraction), format_double(r.standard_error)});
    }
    return payload;
}

std::string run_certificate(const Distribution& model, double eps_tilde, int m_max,
                            std::int64_t trials, const std::vector<std::int64_t>& grid,
                            const SeedSpec& seed, unsigned threads, const OutputSpec& out) {
    const CertificateSchedule sched =
        certificate_schedule(model, eps_tilde, m_max, trials, grid, seed, threads);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : sched.rows) {
            rows.push_back({{"m", r.m},
                            {"eps_m", r.eps_m},
                            {"n_m", r.n_m},
                            {"estimated_escape", r.estimated_escape},
                            {"budget", r.budget}});
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "m,eps_m,n_m,estimated_escape,budget\n";
    for (const auto& r : sched.rows) {
        payload += csv_line({format_int(r.m), format_double(r.eps_m), format_int(r.n_m),
                             format_double(r.estimated_escape), format_double(r.budget)});
    }
    return payload;
}

std::string run_pointwise(const Distribution& model, double x, std::int64_t n, std::int64_t trials,
                          const SeedSpec& seed, unsigned threads, const OutputSpec& out) {
    const PointwiseMoments m = pointwise_moments(model, x, n, trials, seed, threads);
    const double f = model.cdf(x);
    const double mean_theory = f;
    const double var_theory = f * (1.0 - f) / static_cast<double>(n);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        rows.push_back({{"x", x},
                        {"n", n},
                        {"trials", trials},
                        {"mean_est", m.mean},
                        {"var_est", m.variance},
                        {"mean_theory", mean_theory},
                        {"var_theory", var_theory}});
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "x,n,trials,mean_est,var_est,mean_theory,var_theory\n";
    payload += csv_line({format_double(x), format_int(n), format_int(trials), format_double(m.mean),
                         format_double(m.variance), format_double(mean_theory),
                         format_double(var_theory)});
    return payload;
}

std::string run_coverage(const Distribution& model, double x0, const std::vector<std::int64_t>& ns,
                         std::int64_t trials, const SeedSpec& seed, unsigned threads,
                         const OutputSpec& out) {
    std::vector<CoverageReport> reports;
    reports.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (trials > 0) {
            SeedSpec block{seed.master_seed,
                           seed.stream_index +
                               static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(trials)};
            reports.push_back(estimate_miss(model, x0, ns[i], trials, block, threads));
        } else {
            const double analytic = model.is_discrete() ? atom_miss_probability(model, x0, ns[i])
                                                        : range_miss_probability(model, x0, ns[i]);
            reports.push_back({x0, ns[i], analytic, std::nullopt, std::nullopt, std::nullopt});
        }
    }
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : reports) {
            ordered_json row{{"x0", r.x0}, {"n", r.n}, {"analytic", r.analytic_miss}};
            row["mc_estimate"] = r.mc_estimate ? ordered_json(*r.mc_estimate) : ordered_json(nullptr);
            row["stderr"] = r.mc_stderr ? ordered_json(*r.mc_stderr) : ordered_json(nullptr);
            row["trials"] = r.trials ? ordered_json(*r.trials) : ordered_json(nullptr);
            rows.push_back(row);
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "x0,n,analytic,mc_estimate,stderr,trials\n";
    for (const auto& r : reports) {
        payload += csv_line({format_double(r.x0), format_int(r.n), format_double(r.analytic_miss),
                             r.mc_estimate ? format_double(*r.mc_estimate) : "",
                             r.mc_stderr ? format_double(*r.mc_stderr) : "",
                             r.trials ? format_int(*r.trials) : ""});
    }
    return payload;
}

std::string run_partition_cmd(const Distribution& model, const Sample& sample,
                              const Partition& partition, const OutputSpec& out) {
    const PartitionReport report = partition_report(model, sample, partition);
    if (out.json()) {
        ordered_json rows = ordered_json::array();
        for (std::size_t k = 0; k < report.counts.size(); ++k) {
            const auto [lo, hi] = partition.cell_bounds(k);
            rows.push_back({{"cell_low", json_bound(lo)},
                            {"cell_high", json_bound(hi)},
                            {"count", report.counts[k]},
                            {"observed", report.observed[k]},
                            {"theoretical", report.theoretical[k]}});
        }
        return finish_json(ordered_json{{"rows", rows}});
    }
    std::string payload = "cell_low,cell_high,count,observed,theoretical\n";
    for (std::size_t k = 0; k < report.counts.size(); ++k) {
        const auto [lo, hi] = partition.cell_bounds(k);
        payload += csv_line({bound_text(lo), bound_text(hi), format_int(report.counts[k]),
                             format_double(report.observed[k]),
                             format_double(report.theoretical[k])});
    }
    return payload;
}

std::string run_tails(const Distribution& model_a, const Distribution& model_b, double x0,
                      const std::vector<std::int64_t>& n_list, const OutputSpec& out) {
    const std::vector<TailRow> rows = tail_speed_compare(model_a, model_b, x0, n_list);
    if (out.json()) {
        ordered_json jrows = ordered_json::array();
        for (const auto& r : rows) {
            jrows.push_back({{"n", r.n}, {"miss_a", r.miss_a}, {"miss_b", r.miss_b}});
        }
        return finish_json(ordered_json{{"rows", jrows}});
    }
    std::string payload = "n,miss_a,miss_b\n";
    for (const auto& r : rows) {
        payload += csv_line({format_int(r.n), format_double(r.miss_a), format_double(r.miss_b)});
    }
    return payload;
}

void write_payload(const std::string& payload, const OutputSpec& out, std::ostream& fallback) {
    if (out.path.empty()) {
        fallback << payload;
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file " + out.path);
    }
    file << payload;
    if (!file) {
        throw std::runtime_error("failed writing output file " + out.path);
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Empirical distribution functions, exact sup-norm goodness of fit, and Monte Carlo convergence diagnostics"};
    app.require_subcommand(1);

    // sample
    auto* c_sample = app.add_subcommand("sample", "Draw a reproducible sample from a model");
    std::string sample_model;
    std::int64_t sample_n = 0;
    SeedFlags sample_seed;
    OutputSpec sample_out;
    c_sample->add_option("--model", sample_model, "Model spec, e.g. uniform:0,1")->required();
    c_sample->add_option("--n", sample_n, "Sample size")->required();
    add_seed_flags(c_sample, sample_seed, true);
    add_output_flags(c_sample, sample_out);

    // ecdf-eval
    auto* c_ecdf = app.add_subcommand("ecdf-eval", "Evaluate the ECDF of a sample file");
    std::string ecdf_file;
    std::vector<double> ecdf_xs;
    OutputSpec ecdf_out;
    c_ecdf->add_option("--sample-file", ecdf_file, "Sample file, one value per line")->required();
    c_ecdf->add_option("--x", ecdf_xs, "Evaluation points")->required()->delimiter(',');
    add_output_flags(c_ecdf, ecdf_out);

    // ks
    auto* c_ks = app.add_subcommand("ks", "Exact sup distance between a sample ECDF and a model");
    std::string ks_model, ks_file;
    OutputSpec ks_out;
    c_ks->add_option("--model", ks_model, "Model spec")->required();
    c_ks->add_option("--sample-file", ks_file, "Sample file, one value per line")->required();
    add_output_flags(c_ks, ks_out);

    // trajectory
    auto* c_traj = app.add_subcommand("trajectory", "Sup distances along one growing sample path");
    std::string traj_model;
    std::vector<std::int64_t> traj_checkpoints;
    std::vector<double> traj_probes;
    SeedFlags traj_seed;
    OutputSpec traj_out;
    c_traj->add_option("--model", traj_model, "Model spec")->required();
    c_traj->add_option("--checkpoints", traj_checkpoints, "Ascending sample sizes")
        ->required()
        ->delimiter(',');
    c_traj->add_option("--probes", traj_probes, "Probe locations for pointwise errors")->delimiter(',');
    add_seed_flags(c_traj, traj_seed, true);
    add_output_flags(c_traj, traj_out);

    // escape
    auto* c_escape = app.add_subcommand("escape", "Fraction of trials with sup distance >= eps");
    std::string escape_model;
    double escape_eps = 0.0;
    std::vector<std::int64_t> escape_ns;
    std::int64_t escape_trials = 0;
    unsigned escape_threads = 1;
    SeedFlags escape_seed;
    OutputSpec escape_out;
    c_escape->add_option("--model", escape_model, "Model spec")->required();
    c_escape->add_option("--eps", escape_eps, "Escape threshold")->required();
    c_escape->add_option("--n", escape_ns, "Sample size(s)")->required()->delimiter(',');
    c_escape->add_option("--trials", escape_trials, "Independent trials")->required();
    c_escape->add_option("--threads", escape_threads, "Worker threads")->capture_default_str();
    add_seed_flags(c_escape, escape_seed, true);
    add_output_flags(c_escape, escape_out);

    // certificate
    auto* c_cert = app.add_subcommand("certificate", "Smallest grid sizes meeting eps~/2^m escape budgets");
    std::string cert_model;
    double cert_eps_tilde = 0.0;
    int cert_m_max = 0;
    std::int64_t cert_trials = 0;
    std::vector<std::int64_t> cert_grid;
    unsigned cert_threads = 1;
    SeedFlags cert_seed;
    OutputSpec cert_out;
    c_cert->add_option("--model", cert_model, "Model spec")->required();
    c_cert->add_option("--eps-tilde", cert_eps_tilde, "Total escape budget")->required();
    c_cert->add_option("--m-max", cert_m_max, "Rows: m = 1..m_max with eps_m = 1/m")->required();
    c_cert->add_option("--trials", cert_trials, "Trials per grid size")->required();
    c_cert->add_option("--grid", cert_grid, "Ascending candidate sample sizes")->required()->delimiter(',');
    c_cert->add_option("--threads", cert_threads, "Worker threads")->capture_default_str();
    add_seed_flags(c_cert, cert_seed, true);
    add_output_flags(c_cert, cert_out);

    // pointwise
    auto* c_pw = app.add_subcommand("pointwise", "Mean and variance of F_hat_n(x) across trials");
    std::string pw_model;
    double pw_x = 0.0;
    std::int64_t pw_n = 0, pw_trials = 0;
    unsigned pw_threads = 1;
    SeedFlags pw_seed;
    OutputSpec pw_out;
    c_pw->add_option("--model", pw_model, "Model spec")->required();
    c_pw->add_option("--x", pw_x, "Evaluation point")->required();
    c_pw->add_option("--n", pw_n, "Sample size per trial")->required();
    c_pw->add_option("--trials", pw_trials, "Independent trials")->required();
    c_pw->add_option("--threads", pw_threads, "Worker threads")->capture_default_str();
    add_seed_flags(c_pw, pw_seed, true);
    add_output_flags(c_pw, pw_out);

    // coverage
    auto* c_cov = app.add_subcommand("coverage", "Miss probability of a point, analytic and Monte Carlo");
    std::string cov_model;
    double cov_x0 = 0.0;
    std::vector<std::int64_t> cov_ns;
    std::int64_t cov_trials = 0;
    unsigned cov_threads = 1;
    SeedFlags cov_seed;
    OutputSpec cov_out;
    c_cov->add_option("--model", cov_model, "Model spec")->required();
    c_cov->add_option("--x0", cov_x0, "Probe point")->required();
    c_cov->add_option("--n", cov_ns, "Sample size(s)")->required()->delimiter(',');
    auto* cov_trials_opt = c_cov->add_option("--trials", cov_trials, "Monte Carlo trials (optional)");
    c_cov->add_option("--threads", cov_threads, "Worker threads")->capture_default_str();
    auto* cov_seed_opt = c_cov->add_option("--seed", cov_seed.master, "Master seed (required with --trials)");
    c_cov->add_option("--stream", cov_seed.stream, "Base stream index")->capture_default_str();
    add_output_flags(c_cov, cov_out);

    // partition
    auto* c_part = app.add_subcommand("partition", "Cell counts of a sample against model cell probabilities");
    std::string part_model, part_file;
    std::vector<double> part_breaks;
    OutputSpec part_out;
    c_part->add_option("--model", part_model, "Model spec")->required();
    c_part->add_option("--sample-file", part_file, "Sample file, one value per line")->required();
    c_part->add_option("--breaks", part_breaks, "Ascending cell breakpoints")->required()->delimiter(',');
    add_output_flags(c_part, part_out);

    // tails
    auto* c_tails = app.add_subcommand("tails", "Analytic range-miss table for two continuous models");
    std::string tails_a, tails_b;
    double tails_x0 = 0.0;
    std::vector<std::int64_t> tails_ns;
    OutputSpec tails_out;
    c_tails->add_option("--model-a", tails_a, "First model spec")->required();
    c_tails->add_option("--model-b", tails_b, "Second model spec")->required();
    c_tails->add_option("--x0", tails_x0, "Probe point")->required();
    c_tails->add_option("--n-list", tails_ns, "Ascending sample sizes")->required()->delimiter(',');
    add_output_flags(c_tails, tails_out);

    try {
        std::vector<std::string> work(args.begin() + (args.empty() ? 0 : 1), args.end());
        std::reverse(work.begin(), work.end());
        app.parse(work);

        std::string payload;
        const OutputSpec* spec = nullptr;
        if (app.got_subcommand(c_sample)) {
            payload = run_sample(parse_model_spec(sample_model), sample_n, sample_seed.spec(), sample_out);
            spec = &sample_out;
        } else if (app.got_subcommand(c_ecdf)) {
            payload = run_ecdf_eval(read_sample_file(ecdf_file), ecdf_xs, ecdf_out);
            spec = &ecdf_out;
        } else if (app.got_subcommand(c_ks)) {
            payload = run_ks(parse_model_spec(ks_model), read_sample_file(ks_file), ks_out);
            spec = &ks_out;
        } else if (app.got_subcommand(c_traj)) {
            payload = run_trajectory_cmd(parse_model_spec(traj_model), traj_checkpoints, traj_probes,
                                         traj_seed.spec(), traj_out);
            spec = &traj_out;
        } else if (app.got_subcommand(c_escape)) {
            payload = run_escape(parse_model_spec(escape_model), escape_eps, escape_ns, escape_trials,
                                 escape_seed.spec(), escape_threads, escape_out);
            spec = &escape_out;
        } else if (app.got_subcommand(c_cert)) {
            payload = run_certificate(parse_model_spec(cert_model), cert_eps_tilde, cert_m_max,
                                      cert_trials, cert_grid, cert_seed.spec(), cert_threads, cert_out);
            spec = &cert_out;
        } else if (app.got_subcommand(c_pw)) {
            payload = run_pointwise(parse_model_spec(pw_model), pw_x, pw_n, pw_trials, pw_seed.spec(),
                                    pw_threads, pw_out);
            spec = &pw_out;
        } else if (app.got_subcommand(c_cov)) {
            if (cov_trials_opt->count() > 0 && cov_seed_opt->count() == 0) {
                throw std::domain_error("coverage: --seed is required when --trials is given");
            }
            const std::int64_t trials = cov_trials_opt->count() > 0 ? cov_trials : 0;
            payload = run_coverage(parse_model_spec(cov_model), cov_x0, cov_ns, trials,
                                   cov_seed.spec(), cov_threads, cov_out);
            spec = &cov_out;
        } else if (app.got_subcommand(c_part)) {
            payload = run_partition_cmd(parse_model_spec(part_model), read_sample_file(part_file),
                                        Partition(part_breaks), part_out);
            spec = &part_out;
        } else if (app.got_subcommand(c_tails)) {
            payload = run_tails(parse_model_spec(tails_a), parse_model_spec(tails_b), tails_x0,
                                tails_ns, tails_out);
            spec = &tails_out;
        }
        write_payload(payload, *spec, out);
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GridInsufficientError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    return run_cli(args, out, err);
}

}  // namespace ecdflab
