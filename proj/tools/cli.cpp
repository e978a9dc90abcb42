#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "opfree/io.hpp"

namespace opfree::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<long long> seed;
    std::optional<double> tol;
    int jobs = 1;
};

void write_run_meta(const fs::path& out, const std::string& command) {
    const auto now = std::chrono::system_clock::now();
    Json meta{{"command", command},
              {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(
                                now.time_since_epoch())
                                .count()}};
    write_text_file((out / "run_meta.json").string(), json_pretty(meta));
}

fs::path prepare_out(const CommonOpts& opts) {
    fs::path out(opts.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ValidationError("cannot create output directory: " + opts.out_dir);
    return out;
}

double config_tol(const Json& cfg, const CommonOpts& opts, double fallback) {
    if (opts.tol) return *opts.tol;
    if (cfg.contains("tol")) return cfg.at("tol").get<double>();
    return fallback;
}

std::uint64_t config_seed(const Json& cfg, const CommonOpts& opts) {
    if (opts.seed) return static_cast<std::uint64_t>(*opts.seed);
    if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
    return 1;
}

// ---- distribution inputs -------------------------------------------------

struct DistInput {
    CumulantSequence kappa;
    double moment_bound = 0.0;            // declared Sigma_{0,M} bound
    std::optional<RealizedModel> model;   // present for exact-resolvent inputs
};

DistInput load_input(const Json& spec, int dim, int order, std::uint64_t seed) {
    DistInput out;
    const std::string type = spec.at("type").get<std::string>();
    if (type == "semicircle") {
        Eigen::MatrixXcd eta;
        if (spec.contains("eta")) {
            eta = matrix_from_json(spec.at("eta"));
        } else {
            const double s = spec.value("eta_scale", 1.0);
            eta = s * Eigen::MatrixXcd::Identity(dim * dim, dim * dim);
        }
        out.kappa = semicircular(eta, dim, order);
        out.moment_bound = 2.0 * std::sqrt(out.kappa.k(2).max_basis_norm());
    } else if (type == "point_mass") {
        const BElement b = matrix_from_json(spec.at("b"));
        out.kappa = point_mass(b, order);
        out.moment_bound = op_norm(b);
    } else if (type == "realized") {
        RealizedModel model;
        if (spec.contains("matrix")) {
            model = make_realized(dim, spec.at("multiplicity").get<int>(),
                                  matrix_from_json(spec.at("matrix")));
        } else {
            model = random_realized(dim, spec.value("multiplicity", 4),
                                    spec.value("norm", 1.0),
                                    spec.value("seed", static_cast<std::uint64_t>(seed)));
        }
        out.kappa = cumulants_from_moments(moments_from_realized(model, order));
        out.moment_bound = op_norm(model.a);
        out.model = std::move(model);
    } else if (type == "cumulant_file") {
        out.kappa = cumulants_from_json(read_json_file(spec.at("path").get<std::string>()));
        if (out.kappa.dim != dim || out.kappa.order != order)
            throw ValidationError("cumulant_file: dim/order does not match the config");
        // conservative moment bound from the cumulant constant
        const double mc = out.kappa.bound;
        out.moment_bound = spec.value("moment_bound", 16.0 * mc * std::max(mc, 1.0));
    } else {
        throw ValidationError("unknown input type: " + type);
    }
    return out;
}

std::vector<ProbePoint> load_probes(const Json& cfg, int dim) {
    std::vector<ProbePoint> probes;
    if (!cfg.contains("probes")) throw ValidationError("config needs a probes array");
    for (const auto& pj : cfg.at("probes")) {
        const int level = pj.value("level", 1);
        BElement value;
        if (pj.contains("matrix")) {
            value = matrix_from_json(pj.at("matrix"));
        } else {
            const double lam = pj.at("imag_scale").get<double>();
            value = Complex(0.0, lam) * BElement::Identity(level * dim, level * dim);
            if (pj.contains("real"))
                value += amplify_diag(matrix_from_json(pj.at("real")), level);
        }
        probes.push_back(make_probe(value, level));
    }
    return probes;
}

// ---- convolve ------------------------------------------------------------

int cmd_convolve(const CommonOpts& opts) {
    const Json cfg = read_json_file(opts.config_path);
    const fs::path out = prepare_out(opts);
    const int dim = cfg.at("dim").get<int>();
    const int order = cfg.at("order").get<int>();
    const int tail_order = cfg.value("tail_order", order);
    const double tol = config_tol(cfg, opts, 1e-10);
    const std::uint64_t seed = config_seed(cfg, opts);

    const auto& inputs = cfg.at("inputs");
    if (inputs.size() != 2) throw ValidationError("convolve: exactly two inputs required");
    const DistInput in1 = load_input(inputs.at(0), dim, order, seed);
    const DistInput in2 = load_input(inputs.at(1), dim, order, seed + 1);

    const CumulantSequence conv = free_convolve(in1.kappa, in2.kappa);
    write_text_file((out / "convolved.json").string(), json_pretty(cumulants_to_json(conv)));

    const TruncatedMoments conv_mom = moments_from_cumulants(conv);
    TruncatedMoments mom1 = moments_from_cumulants(in1.kappa);
    TruncatedMoments mom2 = moments_from_cumulants(in2.kappa);
    mom1.bound = std::max(mom1.bound, in1.moment_bound);
    mom2.bound = std::max(mom2.bound, in2.moment_bound);
    const CauchyProvider g1 =
        in1.model ? realized_provider(*in1.model) : series_provider(mom1, tail_order);
    const CauchyProvider g2 =
        in2.model ? realized_provider(*in2.model) : series_provider(mom2, tail_order);

    std::ostringstream csv;
    csv.precision(17);
    csv << "probe,level,convention,entry_row,entry_col,cumulant_route_re,cumulant_route_im,"
           "subordination_route_re,subordination_route_im,abs_delta,budget,tail_bound,"
           "iterations\n";
    int probe_id = 0;
    for (const ProbePoint& probe : load_probes(cfg, dim)) {
        const SeriesValue route1 = cauchy_series(conv_mom, probe, tail_order);
        const SubordinationResult route2 = subordination_convolve(g1, g2, probe, tol);
        double provider_tails = 0.0;
        if (!in1.model)
            provider_tails += cauchy_series(mom1, make_probe(route2.omega1, probe.level),
                                            tail_order)
                                  .tail_bound;
        if (!in2.model)
            provider_tails += cauchy_series(mom2, make_probe(route2.omega2, probe.level),
                                            tail_order)
                                  .tail_bound;
        const double budget = route1.tail_bound + 4.0 * provider_tails + 10.0 * tol;
        for (Eigen::Index i = 0; i < route1.value.rows(); ++i)
            for (Eigen::Index j = 0; j < route1.value.cols(); ++j) {
                const Complex a = route1.value(i, j), b = route2.value(i, j);
                csv << probe_id << "," << probe.level << ",standard," << i << "," << j << ","
                    << a.real() << "," << a.imag() << "," << b.real() << "," << b.imag() << ","
                    << std::abs(a - b) << "," << budget << "," << route1.tail_bound << ","
                    << route2.iterations << "\n";
            }
        ++probe_id;
    }
    write_text_file((out / "crosscheck.csv").string(), csv.str());
    write_run_meta(out, "convolve");
    return 0;
}

// ---- steinitz ------------------------------------------------------------

int cmd_steinitz(const CommonOpts& opts, const std::string& vectors_path,
                 std::optional<double> t) {
    const fs::path out = prepare_out(opts);
    const SteinitzInstance inst = make_instance(read_vectors_csv(vectors_path));
    const SelectionResult result = t ? subset_select(inst, *t) : rearrange_zero_sum(inst);
    Json j = selection_to_json(result);
    j["n_dim"] = inst.n_dim;
    j["k"] = inst.vectors.size();
    j["norm_cap"] = inst.norm_cap;
    if (t) j["t"] = *t;
    write_text_file((out / "steinitz_result.json").string(), json_pretty(j));
    write_run_meta(out, "steinitz");
    return 0;
}

// ---- hinchin ---------------------------------------------------------------

CumulantSequence load_target(const Json& cfg, int dim, int order) {
    const Json& tj = cfg.at("target");
    std::optional<CumulantSequence> acc;
    if (tj.contains("semicircle_eta") || tj.contains("semicircle_eta_scale")) {
        Eigen::MatrixXcd eta =
            tj.contains("semicircle_eta")
                ? matrix_from_json(tj.at("semicircle_eta"))
                : tj.at("semicircle_eta_scale").get<double>() *
                      Eigen::MatrixXcd::Identity(dim * dim, dim * dim);
        acc = semicircular(eta, dim, order);
    }
    if (tj.contains("point_mass")) {
        const CumulantSequence pm = point_mass(matrix_from_json(tj.at("point_mass")), order);
        acc = acc ? free_convolve(*acc, pm) : pm;
    }
    if (tj.contains("cumulant_file"))
        acc = cumulants_from_json(read_json_file(tj.at("cumulant_file").get<std::string>()));
    if (!acc) throw ValidationError("hinchin: empty target specification");
    return *acc;
}

ShiftPlan load_shift_plan(const Json& cfg, int dim, std::size_t rows) {
    if (!cfg.contains("shift_plan")) return ShiftPlan::zero(dim, static_cast<int>(rows));
    const Json& sj = cfg.at("shift_plan");
    if (sj.contains("shifts")) {
        ShiftPlan plan;
        for (const auto& s : sj.at("shifts")) plan.shifts.push_back(matrix_from_json(s));
        plan.limit = sj.contains("limit") ? matrix_from_json(sj.at("limit"))
                                          : BElement::Zero(dim, dim).eval();
        if (plan.shifts.size() != rows)
            throw ValidationError("shift_plan: one shift per row required");
        return plan;
    }
    const std::string kind = sj.value("kind", "zero");
    if (kind == "zero") return ShiftPlan::zero(dim, static_cast<int>(rows));
    if (kind == "decaying") {
        ShiftPlan plan;
        plan.limit = BElement::Zero(dim, dim);
        const BElement dir = sj.contains("direction")
                                 ? matrix_from_json(sj.at("direction"))
                                 : BElement::Identity(dim, dim).eval();
        const double scale = sj.value("scale", 0.5);
        for (std::size_t i = 0; i < rows; ++i)
            plan.shifts.push_back(scale / static_cast<double>(i + 1) * dir);
        return plan;
    }
    throw ValidationError("shift_plan: unknown kind " + kind);
}

int cmd_hinchin(const CommonOpts& opts) {
    const Json cfg = read_json_file(opts.config_path);
    const fs::path out = prepare_out(opts);
    const int dim = cfg.at("dim").get<int>();
    const int order = cfg.at("order").get<int>();
    const int tail_order = cfg.value("tail_order", order);
    const std::uint64_t seed = config_seed(cfg, opts);
    const int p = cfg.at("p").get<int>();
    const std::vector<int> rows = cfg.at("rows").get<std::vector<int>>();
    const double noise = cfg.value("noise_scale", 0.0);
    const int probe_count = cfg.value("probe_count", dim * dim + 2);

    const CumulantSequence target = load_target(cfg, dim, order);
    const ShiftPlan plan = load_shift_plan(cfg, dim, rows.size());
    const TriangularArray array = build_array_from_id(target, rows, plan, noise, seed);

    const double M_exp = std::max(array.limit.bound, 1e-6);
    const double lambda = cfg.contains("lambda") && !cfg.at("lambda").is_null()
                              ? cfg.at("lambda").get<double>()
                              : 16.0 * M_exp * 1.125;
    if (!(lambda > 16.0 * M_exp))
        throw ValidationError("hinchin: probe lambda must exceed 16*M");
    const ProbeSet probes = build_probes(probe_count, M_exp, lambda, seed + 1000, dim);

    const ExperimentReport rep = run_hinchin(array, p, probes, tail_order, opts.jobs);

    std::ostringstream jsonl;
    for (const auto& row : rep.rows) jsonl << row_report_to_json(row).dump() << "\n";
    write_text_file((out / "hinchin_rows.jsonl").string(), jsonl.str());

    std::ostringstream csv;
    csv.precision(17);
    csv << "row,n_i,sigma_size,deviation,budget,verdict\n";
    for (const auto& row : rep.rows)
        csv << row.row << "," << row.n_i << "," << row.sigma.size() << "," << row.phi_deviation
            << "," << row.phi_budget << "," << row.verdict << "\n";
    write_text_file((out / "hinchin_summary.csv").string(), csv.str());

    Json report = experiment_to_json(rep);
    report["lambda"] = lambda;
    report["probe_count"] = probe_count;
    report["seed"] = seed;
    report["noise_scale"] = noise;
    write_text_file((out / "report.json").string(), json_pretty(report));
    write_run_meta(out, "hinchin");
    return 0;
}

// ---- check -----------------------------------------------------------------

int cmd_check(const CommonOpts& opts) {
    const Json cfg = read_json_file(opts.config_path);
    const fs::path out = prepare_out(opts);
    const int dim = cfg.at("dim").get<int>();
    const int order = cfg.at("order").get<int>();
    const std::uint64_t seed = config_seed(cfg, opts);

    TruncatedMoments mu;
    if (cfg.contains("moments_file")) {
        mu = moments_from_json(read_json_file(cfg.at("moments_file").get<std::string>()));
    } else if (cfg.contains("model")) {
        const Json& mj = cfg.at("model");
        RealizedModel model =
            mj.contains("matrix")
                ? make_realized(dim, mj.at("multiplicity").get<int>(),
                                matrix_from_json(mj.at("matrix")))
                : random_realized(dim, mj.value("multiplicity", 4), mj.value("norm", 1.0),
                                  mj.value("seed", seed));
        mu = moments_from_realized(model, order);
    } else {
        throw ValidationError("check: need a moments_file or a model");
    }

    const double M = cfg.value("M", mu.bound);
    const int cutoff = cfg.value("degree_cutoff", std::min(2, (mu.order - 1) / 2));
    const int family_degree = cfg.value("family_degree", std::min(2, mu.order / 2));

    const TracialReport tr = check_tracial_conditions(mu, M, cutoff);
    const CpReport cp = check_complete_positivity(mu, family_degree);
    const ExpBoundReport eb = exp_bound_check(mu, M);

    Json report{
        {"tracial",
         Json{{"M", tr.M},
              {"degree_cutoff", tr.degree_cutoff},
              {"condition_1", Json{{"pass", tr.pass_1}, {"worst", tr.worst_1}}},
              {"condition_2", Json{{"pass", tr.pass_2}, {"worst", tr.worst_2}}},
              {"condition_3", Json{{"pass", tr.pass_3}, {"worst", tr.worst_3}}}}},
        {"complete_positivity", Json{{"pass", cp.pass},
                                     {"min_eigenvalue", cp.min_eigenvalue},
                                     {"family_degree", cp.family_degree}}},
        {"exponential_bound",
         Json{{"pass", eb.pass}, {"worst_ratio", eb.worst_ratio}, {"worst_order", eb.worst_order}}}};
    write_text_file((out / "check_report.json").string(), json_pretty(report));
    write_run_meta(out, "check");
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"operator-valued free probability toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string vectors_path;
    std::optional<double> t_value;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* copt = sub->add_option("--config", opts.config_path, "JSON config file");
        if (needs_config) copt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", opts.seed, "override the config seed");
        sub->add_option("--tol", opts.tol, "override the config tolerance");
        sub->add_option("--jobs", opts.jobs, "row-level parallelism")->check(CLI::PositiveNumber);
    };

    CLI::App* conv = app.add_subcommand("convolve", "free additive convolution + cross-check");
    add_common(conv, true);
    CLI::App* stein = app.add_subcommand("steinitz", "rearrangement / subset selection");
    add_common(stein, false);
    stein->add_option("--vectors", vectors_path, "CSV file, one vector per line")
        ->required()
        ->check(CLI::ExistingFile);
    stein->add_option("--t", t_value, "subset-selection fraction in (0,1)");
    CLI::App* hin = app.add_subcommand("hinchin", "triangular-array divisibility experiment");
    add_common(hin, true);
    CLI::App* chk = app.add_subcommand("check", "tracial / positivity condition checkers");
    add_common(chk, true);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (conv->parsed()) return cmd_convolve(opts);
        if (stein->parsed()) return cmd_steinitz(opts, vectors_path, t_value);
        if (hin->parsed()) return cmd_hinchin(opts);
        if (chk->parsed()) return cmd_check(opts);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace opfree::cli
