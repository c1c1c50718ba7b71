#pragma once

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "orbitmetric/orbitmetric.hpp"

namespace orbitmetric::cli {

/// Knobs shared by the batch commands. Randomized commands are bit
/// reproducible given (seed, threads = 1); ORBITMETRIC_SEED overrides the
/// default seed 0 when --seed is not passed.
struct ExperimentConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string output_path;
    std::uint64_t seed = 0;
    int threads = 1;
    std::int64_t samples = 0;
    double tol = 1e-4;
};

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("ORBITMETRIC_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

inline Eigen::VectorXd parse_vector(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidParameter("cannot parse vector entry: " + item);
        }
    }
    if (values.empty()) throw InvalidParameter("empty vector argument");
    Eigen::VectorXd v(static_cast<int>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<int>(i)) = values[i];
    return v;
}

inline std::vector<Eigen::VectorXd> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open file: " + path);
    std::vector<Eigen::VectorXd> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_vector(line));
    }
    return rows;
}

inline void write_csv_row(std::ostream& out, const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << format_double(v(i));
    }
    out << '\n';
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open file for writing: " + path);
    return out;
}

namespace detail {

inline InvariantMap scatter_family(const std::string& family, int dim) {
    if (family == "projective_raw") return unnormalized_projective_map(dim);
    if (family == "projective_normalized") return real_projective_embed(dim);
    if (family == "projective_sphere") return projective_sphere_map(dim);
    throw InvalidParameter("figure-scatter family must be projective_raw, projective_normalized or projective_sphere");
}

inline int cmd_distance(const ExperimentConfig& cfg, std::ostream& out) {
    const GroupAction action = load_group_action(cfg.inputs[0]);
    const Eigen::VectorXd x = parse_vector(cfg.inputs[1]);
    const Eigen::VectorXd y = parse_vector(cfg.inputs[2]);
    out << "distance " << format_double(quotient_distance(action, x, y)) << ", maxfilter "
        << format_double(max_filter(action, x, y)) << "\n";
    return 0;
}

inline int cmd_maxfilter(const ExperimentConfig& cfg, std::ostream& out) {
    const GroupAction action = load_group_action(cfg.inputs[0]);
    const Eigen::VectorXd z = parse_vector(cfg.inputs[1]);
    const Eigen::VectorXd x = parse_vector(cfg.inputs[2]);
    out << "maxfilter " << format_double(max_filter(action, z, x)) << "\n";
    return 0;
}

inline int cmd_embed(const ExperimentConfig& cfg, std::ostream& out) {
    const InvariantMap map = embedding_from_json(load_json_file(cfg.inputs[0]));
    const auto rows = read_csv_rows(cfg.inputs[1]);
    std::ofstream file = open_output(cfg.output_path);
    for (const auto& row : rows) write_csv_row(file, map(row));
    out << "embedded " << rows.size() << " points\n";
    return 0;
}

inline int cmd_figure_scatter(const ExperimentConfig& cfg, int dim, std::ostream& out) {
    const std::string& family = cfg.inputs[0];
    const InvariantMap map = scatter_family(family, dim);
    const PairSampler sampler = (family == "projective_sphere") ? sphere_pair_sampler(dim) : gaussian_pair_sampler(dim);
    std::ofstream file = open_output(cfg.output_path);
    file << "input_distance,output_distance\n";
    if (cfg.samples == 0) {
        out << "no samples\n";
        return 0;
    }
    const auto est = empirical_bilipschitz(map, sampler, cfg.samples, cfg.seed, &file, cfg.threads);
    out << "min_ratio " << format_double(est.alpha_hat) << ", max_ratio " << format_double(est.beta_hat) << ", pairs "
        << est.used << ", degenerate " << est.degenerate << "\n";
    return 0;
}

inline int cmd_cycle_table(const std::vector<int>& ns, double tol, std::ostream& out) {
    bool mismatch = false;
    for (const int n : ns) {
        if (n % 2 != 0) {
            out << "n=" << n << " rejected (odd)\n";
            continue;
        }
        if (n > 64) {
            out << "n=" << n << " rejected (n > 64)\n";
            continue;
        }
        const FiniteMetric metric = cycle_graph_metric(n);
        const DistortionCertificate cert = sdp_distortion(metric, tol);
        const double c2 = std::sqrt(cert.t);
        const double formula = 0.5 * n * std::sin(M_PI / n);
        const DualVerification dual = verify_dual(metric, cycle_certificate(n), c2);
        const bool row_ok = std::abs(c2 - formula) <= 1e-4 && std::abs(dual.gap) <= 1e-8;
        out << "n=" << n << " c2=" << format_double(c2) << " formula=" << format_double(formula)
            << " dual_gap=" << format_double(dual.gap) << (row_ok ? "" : " MISMATCH") << "\n";
        mismatch = mismatch || !row_ok;
    }
    return mismatch ? 1 : 0;
}

inline int cmd_sdp(const ExperimentConfig& cfg, std::ostream& out) {
    const FiniteMetric metric = finite_metric_from_json(load_json_file(cfg.inputs[0]));
    const DistortionCertificate cert = sdp_distortion(metric, cfg.tol);
    write_json_file(cfg.output_path, certificate_to_json(cert));
    out << "t " << format_double(cert.t) << ", c2 " << format_double(std::sqrt(cert.t)) << "\n";
    return 0;
}

inline int cmd_verify_dual(const ExperimentConfig& cfg, double c, std::ostream& out) {
    const FiniteMetric metric = finite_metric_from_json(load_json_file(cfg.inputs[0]));
    const DualCertificate dual = dual_from_json(load_json_file(cfg.inputs[1]));
    const DualVerification v = verify_dual(metric, dual, c);
    out << "gap " << format_double(v.gap) << ", optimal " << (v.optimal ? "true" : "false") << "\n";
    return 0;
}

inline int cmd_lower_bound(const ExperimentConfig& cfg, int set_size, int rounds, int max_support, int dim,
                           std::ostream& out) {
    const std::string& space = cfg.inputs[0];
    json result;
    double best = 1.0;
    if (space == "shift") {
        const auto res = lower_bound_search<SparseSeq>(
            shift_space_sampler(max_support),
            [](const SparseSeq& a, const SparseSeq& b) { return shift_quotient_distance(a, b); }, set_size, rounds,
            cfg.seed, cfg.tol, cfg.threads);
        best = res.best_c2;
        json witness = json::array();
        for (const auto& w : res.witness) witness.push_back(sparse_seq_to_json(w));
        result = json{{"space", "shift"},
                      {"best_c2", res.best_c2},
                      {"witness", std::move(witness)},
                      {"certificate", certificate_to_json(res.certificate)},
                      {"running_best", res.running_best},
                      {"failed_rounds", res.failed_rounds}};
    } else if (space == "euclidean") {
        const auto res = lower_bound_search<Eigen::VectorXd>(
            [dim](Rng& rng) { return rng.gaussian_vector(dim); },
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }, set_size, rounds,
            cfg.seed, cfg.tol, cfg.threads);
        best = res.best_c2;
        json witness = json::array();
        for (const auto& w : res.witness) witness.push_back(vector_to_json(w));
        result = json{{"space", "euclidean"},
                      {"best_c2", res.best_c2},
                      {"witness", std::move(witness)},
                      {"certificate", certificate_to_json(res.certificate)},
                      {"running_best", res.running_best},
                      {"failed_rounds", res.failed_rounds}};
    } else {
        throw InvalidParameter("lower-bound space must be 'shift' or 'euclidean'");
    }
    write_json_file(cfg.output_path, result);
    out << "best_c2 " << format_double(best) << "\n";
    return 0;
}

inline int cmd_probe(const ExperimentConfig& cfg, int dim, double amplitude, const std::vector<double>& radii,
                     std::ostream& out) {
    const std::string& family = cfg.inputs[0];
    InvariantMap map;
    Eigen::VectorXd center;
    if (family == "projective_raw") {
        map = unnormalized_projective_map(dim);
        center = Eigen::VectorXd::Zero(dim);
    } else if (family == "projective_normalized") {
        map = real_projective_embed(dim);
        center = Eigen::VectorXd::Zero(dim);
    } else if (family == "bank_dihedral") {
        auto action = std::make_shared<GroupAction>([&] {
            std::vector<Eigen::MatrixXd> els;
            for (int k = 0; k < 3; ++k) {
                const double t = 2.0 * M_PI * k / 3;
                Eigen::MatrixXd rot(2, 2), ref(2, 2);
                rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
                ref << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
                els.push_back(rot);
                els.push_back(ref);
            }
            return GroupAction::finite_matrix(els);
        }());
        std::vector<Eigen::VectorXd> templates(3, Eigen::VectorXd(2));
        templates[0] << 1, 1;
        templates[1] << 1, 2;
        templates[2] << 3, 1;
        map = make_action_map(action, 3, [action, templates](const Eigen::VectorXd& x) {
            return max_filter_bank(*action, templates, x);
        });
        center = Eigen::VectorXd::Zero(2);
    } else if (family == "bispectrum") {
        map = bispectrum_map(dim);
        center = Eigen::VectorXd::Zero(2 * dim);
        for (int i = 0; i < dim; ++i) center(2 * i) = amplitude;
    } else {
        throw InvalidParameter("probe family must be projective_raw, projective_normalized, bank_dihedral or bispectrum");
    }
    const auto rows = lower_lipschitz_probe(map, center, radii, cfg.seed);
    std::ofstream file = open_output(cfg.output_path);
    file << "radius,min_ratio\n";
    for (const auto& [r, ratio] : rows) file << format_double(r) << ',' << format_double(ratio) << '\n';
    out << "probed " << rows.size() << " radii\n";
    return 0;
}

inline int cmd_mds(const ExperimentConfig& cfg, int k, const std::string& embedding_path, std::ostream& out) {
    const Dataset data = dataset_from_json(load_json_file(cfg.inputs[0]));
    MdsResult res;
    if (!embedding_path.empty()) {
        res = quotient_mds(data, embedding_from_json(load_json_file(embedding_path)), k);
        out << "residual " << format_double(res.gram_residual) << ", bound " << format_double(res.error_bound) << "\n";
    } else {
        const int n = static_cast<int>(data.points.size());
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d = data.quotient_distance_between(i, j);
                D(i, j) = D(j, i) = d * d;
            }
        res = classical_mds(D, k);
        out << "top_eigenvalue " << format_double(res.eigenvalues(0)) << "\n";
    }
    std::ofstream file = open_output(cfg.output_path);
    for (int i = 0; i < res.coordinates.rows(); ++i) write_csv_row(file, res.coordinates.row(i));
    return 0;
}

inline int cmd_kmeans(const ExperimentConfig& cfg, int k, std::ostream& out) {
    const Dataset data = dataset_from_json(load_json_file(cfg.inputs[0]));
    const InvariantMap map = embedding_from_json(load_json_file(cfg.inputs[1]));
    const KmeansResult res = pullback_kmeans(data, map, k, cfg.seed);
    out << "embedded_objective " << format_double(res.embedded_objective) << "\n";
    out << "quotient_objective " << format_double(res.quotient_objective) << "\n";
    for (int c = 0; c < k; ++c) {
        out << "cluster " << c << ":";
        for (std::size_t i = 0; i < res.labels.size(); ++i) {
            if (res.labels[i] == c) out << ' ' << i;
        }
        out << "\n";
    }
    return 0;
}

inline int cmd_ann(const ExperimentConfig& cfg, std::ostream& out) {
    const Dataset data = dataset_from_json(load_json_file(cfg.inputs[0]));
    const InvariantMap map = embedding_from_json(load_json_file(cfg.inputs[1]));
    const Eigen::VectorXd query = parse_vector(cfg.inputs[2]);
    out << "index " << pullback_ann(data, map, query) << "\n";
    return 0;
}

inline int cmd_bispectrum(const ExperimentConfig& cfg, std::ostream& out) {
    const Eigen::VectorXd x = parse_vector(cfg.inputs[0]);
    const Eigen::MatrixXcd B = bispectrum(to_complex(x));
    if (!cfg.output_path.empty()) {
        std::ofstream file = open_output(cfg.output_path);
        for (int kk = 0; kk < B.rows(); ++kk) {
            Eigen::VectorXd row(2 * B.cols());
            for (int l = 0; l < B.cols(); ++l) {
                row(2 * l) = B(kk, l).real();
                row(2 * l + 1) = B(kk, l).imag();
            }
            write_csv_row(file, row);
        }
    }
    out << "bispectrum " << B.rows() << "x" << B.cols() << ", B00 " << format_double(B(0, 0).real()) << "+"
        << format_double(B(0, 0).imag()) << "i\n";
    return 0;
}

}  // namespace detail

/// Parses and runs one CLI invocation. Exit codes: 0 success, 1 assertion or
/// acceptance failure, 2 input validation, 3 solver failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"orbitmetric: metric quotients, invariant embeddings, and distortion certificates"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    cfg.seed = default_seed();
    int dim = 0, set_size = 8, rounds = 100, max_support = 6, k = 2;
    double c_value = 1.0, amplitude = 0.05, sdp_tol = 1e-6;
    std::vector<int> cycle_ns;
    std::vector<double> radii = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::string embedding_path;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", cfg.seed, "random seed (default: ORBITMETRIC_SEED or 0)");
        cmd->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    CLI::App* distance = app.add_subcommand("distance", "quotient distance and max filter between two vectors");
    distance->add_option("group", "group specification JSON file")->required();
    distance->add_option("x", "first vector, comma separated")->required();
    distance->add_option("y", "second vector, comma separated")->required();

    CLI::App* maxfilter = app.add_subcommand("maxfilter", "max filter <<[z],[x]>>");
    maxfilter->add_option("group", "group specification JSON file")->required();
    maxfilter->add_option("z", "template vector")->required();
    maxfilter->add_option("x", "input vector")->required();

    CLI::App* embed = app.add_subcommand("embed", "evaluate an embedding on CSV points");
    embed->add_option("spec", "embedding specification JSON file")->required();
    embed->add_option("points", "input CSV of points")->required();
    embed->add_option("out", cfg.output_path, "output CSV")->required();

    CLI::App* scatter = app.add_subcommand("figure-scatter", "input/output distance pairs for an embedding family");
    scatter->add_option("family", "projective_raw | projective_normalized | projective_sphere")->required();
    scatter->add_option("samples", cfg.samples, "number of sampled pairs")->required();
    scatter->add_option("out", cfg.output_path, "output CSV")->required();
    scatter->add_option("--dim", dim, "ambient dimension");
    add_common(scatter);

    CLI::App* cycle = app.add_subcommand("cycle-table", "SDP distortion of even cycles against the closed form");
    cycle->add_option("n", cycle_ns, "cycle sizes")->required();
    cycle->add_option("--tol", sdp_tol, "SDP tolerance");

    CLI::App* sdp = app.add_subcommand("sdp", "Euclidean distortion certificate of a finite metric");
    sdp->add_option("metric", "metric JSON file")->required();
    sdp->add_option("out", cfg.output_path, "certificate JSON output")->required();
    sdp->add_option("--tol", sdp_tol, "bisection tolerance on t");

    CLI::App* vdual = app.add_subcommand("verify-dual", "weak duality gap of a dual certificate");
    vdual->add_option("metric", "metric JSON file")->required();
    vdual->add_option("dual", "dual certificate JSON file")->required();
    vdual->add_option("c", c_value, "claimed distortion")->required();

    CLI::App* lower = app.add_subcommand("lower-bound", "certified distortion lower bound by subset sampling");
    lower->add_option("space", "shift | euclidean")->required();
    lower->add_option("size", set_size, "points per sampled subset")->required();
    lower->add_option("rounds", rounds, "sampling rounds")->required();
    lower->add_option("out", cfg.output_path, "witness JSON output")->required();
    lower->add_option("--tol", cfg.tol, "SDP tolerance");
    lower->add_option("--max-support", max_support, "support bound for shift-space samples");
    lower->add_option("--dim", dim, "dimension for the euclidean space");
    add_common(lower);

    CLI::App* probe = app.add_subcommand("probe", "lower Lipschitz probe around a center");
    probe->add_option("family", "projective_raw | projective_normalized | bank_dihedral | bispectrum")->required();
    probe->add_option("out", cfg.output_path, "output CSV of radius,min_ratio")->required();
    probe->add_option("--dim", dim, "dimension (complex dimension for bispectrum)");
    probe->add_option("--amplitude", amplitude, "constant-vector amplitude for the bispectrum probe");
    probe->add_option("--radii", radii, "probe radii, decreasing");
    add_common(probe);

    CLI::App* mds = app.add_subcommand("mds", "classical MDS of a quotient dataset");
    mds->add_option("dataset", "dataset JSON file")->required();
    mds->add_option("k", k, "target dimension")->required();
    mds->add_option("out", cfg.output_path, "coordinates CSV output")->required();
    mds->add_option("--embedding", embedding_path, "embedding spec JSON for the error-bound comparison");

    CLI::App* kmeans = app.add_subcommand("kmeans", "pullback k-means through an embedding");
    kmeans->add_option("dataset", "dataset JSON file")->required();
    kmeans->add_option("embedding", "embedding spec JSON file")->required();
    kmeans->add_option("k", k, "number of clusters")->required();
    add_common(kmeans);

    CLI::App* ann = app.add_subcommand("ann", "pullback nearest neighbor through an embedding");
    ann->add_option("dataset", "dataset JSON file")->required();
    ann->add_option("embedding", "embedding spec JSON file")->required();
    ann->add_option("query", "query vector, comma separated")->required();

    CLI::App* bisp = app.add_subcommand("bispectrum", "bispectrum of a complex vector (interleaved re,im)");
    bisp->add_option("x", "input vector, comma separated interleaved re,im")->required();
    bisp->add_option("out", cfg.output_path, "optional output CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto positionals = [](CLI::App* cmd) {
        std::vector<std::string> values;
        for (const CLI::Option* opt : cmd->get_options()) {
            if (opt->get_positional() && !opt->results().empty()) values.push_back(opt->results().front());
        }
        return values;
    };

    try {
        if (app.got_subcommand(distance)) {
            cfg.inputs = positionals(distance);
            return detail::cmd_distance(cfg, out);
        }
        if (app.got_subcommand(maxfilter)) {
            cfg.inputs = positionals(maxfilter);
            return detail::cmd_maxfilter(cfg, out);
        }
        if (app.got_subcommand(embed)) {
            cfg.inputs = positionals(embed);
            return detail::cmd_embed(cfg, out);
        }
        if (app.got_subcommand(scatter)) {
            cfg.inputs = positionals(scatter);
            return detail::cmd_figure_scatter(cfg, dim > 0 ? dim : 2, out);
        }
        if (app.got_subcommand(cycle)) return detail::cmd_cycle_table(cycle_ns, sdp_tol, out);
        if (app.got_subcommand(sdp)) {
            cfg.inputs = positionals(sdp);
            cfg.tol = sdp_tol;
            return detail::cmd_sdp(cfg, out);
        }
        if (app.got_subcommand(vdual)) {
            cfg.inputs = positionals(vdual);
            return detail::cmd_verify_dual(cfg, c_value, out);
        }
        if (app.got_subcommand(lower)) {
            cfg.inputs = positionals(lower);
            return detail::cmd_lower_bound(cfg, set_size, rounds, max_support, dim > 0 ? dim : 4, out);
        }
        if (app.got_subcommand(probe)) {
            cfg.inputs = positionals(probe);
            const int probe_dim = dim > 0 ? dim : (cfg.inputs[0] == "bispectrum" ? 8 : 2);
            return detail::cmd_probe(cfg, probe_dim, amplitude, radii, out);
        }
        if (app.got_subcommand(mds)) {
            cfg.inputs = positionals(mds);
            return detail::cmd_mds(cfg, k, embedding_path, out);
        }
        if (app.got_subcommand(kmeans)) {
            cfg.inputs = positionals(kmeans);
            return detail::cmd_kmeans(cfg, k, out);
        }
        if (app.got_subcommand(ann)) {
            cfg.inputs = positionals(ann);
            return detail::cmd_ann(cfg, out);
        }
        if (app.got_subcommand(bisp)) {
            cfg.inputs = positionals(bisp);
            return detail::cmd_bispectrum(cfg, out);
        }
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace orbitmetric::cli
