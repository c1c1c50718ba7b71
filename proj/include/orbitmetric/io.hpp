#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "orbitmetric/applications.hpp"
#include "orbitmetric/embeddings.hpp"
#include "orbitmetric/errors.hpp"
#include "orbitmetric/finite_metric.hpp"
#include "orbitmetric/group_action.hpp"
#include "orbitmetric/io_format.hpp"
#include "orbitmetric/poly_invariants.hpp"
#include "orbitmetric/polynomial.hpp"
#include "orbitmetric/sdp.hpp"
#include "orbitmetric/sequences.hpp"

namespace orbitmetric {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidParameter("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

inline json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidParameter("expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw InvalidParameter("ragged matrix rows");
        for (int c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
    }
    return M;
}

inline Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

/// Group specification format:
///   {"kind": "sign"|"phase"|"cyclic_rotation"|"permutation"|"circular_shift"
///           |"finite_matrix"|"diagonal_unitary"|"integer_shift"|"multiset",
///    "d": dim, "r": order, "n": size, "mode": "coordinates"|"columns",
///    "matrices": [[row-major reals]],
///    "orders": [generator orders],
///    "characters": [[ [re,im] per generator ] per coordinate]}
/// The loader validates the action invariants and reports the first violation.
inline GroupAction group_action_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sign") return GroupAction::sign(j.at("d").get<int>());
    if (kind == "phase") return GroupAction::phase(j.at("d").get<int>());
    if (kind == "cyclic_rotation") return GroupAction::cyclic_rotation(j.at("r").get<int>(), j.value("d", 1));
    if (kind == "circular_shift") return GroupAction::circular_shift(j.at("n").get<int>());
    if (kind == "integer_shift") return GroupAction::integer_shift();
    if (kind == "multiset") return GroupAction::multiset(j.at("d").get<int>());
    if (kind == "permutation") {
        const std::string mode = j.value("mode", std::string("coordinates"));
        if (mode == "coordinates") return GroupAction::permutation_coordinates(j.at("n").get<int>());
        if (mode == "columns") return GroupAction::permutation_columns(j.at("n").get<int>(), j.at("d").get<int>());
        throw InvalidParameter("permutation mode must be 'coordinates' or 'columns'");
    }
    if (kind == "finite_matrix") {
        const int d = j.at("d").get<int>();
        std::vector<Eigen::MatrixXd> els;
        for (const auto& flat : j.at("matrices")) {
            if (static_cast<int>(flat.size()) != d * d)
                throw InvalidParameter("finite_matrix: each matrix must have d*d row-major entries");
            Eigen::MatrixXd M(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) M(r, c) = flat[r * d + c].get<double>();
            els.push_back(std::move(M));
        }
        return GroupAction::finite_matrix(std::move(els));
    }
    if (kind == "diagonal_unitary") {
        std::vector<int> orders;
        for (const auto& o : j.at("orders")) orders.push_back(o.get<int>());
        const auto& chars = j.at("characters");
        const int d = static_cast<int>(chars.size());
        if (d < 1) throw InvalidParameter("diagonal_unitary: empty character list");
        Eigen::MatrixXcd gen(d, static_cast<int>(orders.size()));
        for (int i = 0; i < d; ++i) {
            if (chars[i].size() != orders.size())
                throw InvalidParameter("diagonal_unitary: one character value per generator expected");
            for (std::size_t g = 0; g < orders.size(); ++g) {
                gen(i, static_cast<int>(g)) =
                    std::complex<double>(chars[i][g][0].get<double>(), chars[i][g][1].get<double>());
            }
        }
        return CharacterTable(orders, gen).action();
    }
    throw InvalidParameter("unknown action kind: " + kind);
}

inline GroupAction load_group_action(const std::string& path) { return group_action_from_json(load_json_file(path)); }

/// Metric file format: {"n": int, "D": [[squared distances]]}.
inline FiniteMetric finite_metric_from_json(const json& j) {
    const Eigen::MatrixXd D = matrix_from_json(j.at("D"));
    if (j.contains("n") && j.at("n").get<int>() != D.rows())
        throw InvalidParameter("metric: declared n does not match D");
    return FiniteMetric::from_squared(D);
}

inline json finite_metric_to_json(const FiniteMetric& m) { return json{{"n", m.n}, {"D", matrix_to_json(m.D)}}; }

/// Certificate export: {"t": real, "Q": [[...]]}.
inline json certificate_to_json(const DistortionCertificate& cert) {
    return json{{"t", cert.t}, {"Q", matrix_to_json(cert.Q)}};
}

inline DistortionCertificate certificate_from_json(const json& j) {
    return {j.at("t").get<double>(), matrix_from_json(j.at("Q"))};
}

inline json dual_to_json(const DualCertificate& dual) { return json{{"Q", matrix_to_json(dual.Q)}}; }

inline DualCertificate dual_from_json(const json& j) { return {matrix_from_json(j.at("Q"))}; }

/// SparseSeq format: {"d": int, "entries": [[index, [values]]]}.
inline json sparse_seq_to_json(const SparseSeq& s) {
    json entries = json::array();
    for (const auto& [idx, val] : s.entries) entries.push_back(json::array({idx, vector_to_json(val)}));
    return json{{"d", s.d}, {"entries", std::move(entries)}};
}

inline SparseSeq sparse_seq_from_json(const json& j) {
    const int d = j.at("d").get<int>();
    std::vector<std::pair<long long, Eigen::VectorXd>> raw;
    for (const auto& e : j.at("entries")) {
        raw.emplace_back(e[0].get<long long>(), vector_from_json(e[1]));
    }
    return SparseSeq(d, std::move(raw));
}

/// Embedding spec: {"family": "projective"|"complex_phase"|"power"|"sum"|
///                  "projective_raw"|"projective_sphere"|"power_sphere"|
///                  "bispectrum"|"abelian", parameters...}.
inline InvariantMap embedding_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "projective") return real_projective_embed(j.at("d").get<int>());
    if (family == "projective_raw") return unnormalized_projective_map(j.at("d").get<int>());
    if (family == "projective_sphere") return projective_sphere_map(j.at("d").get<int>());
    if (family == "complex_phase") return complex_phase_embed(j.at("d").get<int>());
    if (family == "power") {
        const int r = j.at("r").get<int>();
        return j.contains("t") ? power_map_embed(r, j.at("t").get<double>()) : power_map_embed(r);
    }
    if (family == "power_sphere") return power_sphere_map(j.at("r").get<int>());
    if (family == "bispectrum") return bispectrum_map(j.at("d").get<int>());
    if (family == "sum") {
        const InvariantMap f1 = embedding_from_json(j.at("first"));
        const InvariantMap f2 = embedding_from_json(j.at("second"));
        return direct_sum(f1, f2, j.value("rescale", true));
    }
    if (family == "abelian") {
        const auto& gen = j.at("generator");
        Eigen::VectorXcd diag(static_cast<int>(gen.size()));
        for (int i = 0; i < diag.size(); ++i)
            diag(i) = std::complex<double>(gen[i][0].get<double>(), gen[i][1].get<double>());
        const CharacterTable table = CharacterTable::cyclic(diag);
        const auto m = abelian_exponents(table);
        if (!m) throw InvalidParameter("abelian embedding: the action is not free on the sphere");
        return abelian_invariant(table, *m);
    }
    throw InvalidParameter("unknown embedding family: " + family);
}

/// Dataset format: {"group": <group object or file path>, "points": [[...]]}.
inline Dataset dataset_from_json(const json& j) {
    json group = j.at("group");
    if (group.is_string()) group = load_json_file(group.get<std::string>());
    auto action = std::make_shared<GroupAction>(group_action_from_json(group));
    std::vector<Eigen::VectorXd> points;
    for (const auto& row : j.at("points")) points.push_back(vector_from_json(row));
    return Dataset::create(std::move(action), std::move(points));
}

/// Polynomial export as a JSON term list: [{"exponents": [...], "coeff": c}].
inline json polynomial_to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json exps = json::array();
        for (int k : e) exps.push_back(k);
        terms.push_back(json{{"exponents", std::move(exps)}, {"coeff", c}});
    }
    return json{{"dim", p.dim()}, {"terms", std::move(terms)}};
}

inline MultiPoly polynomial_from_json(const json& j) {
    MultiPoly p(j.at("dim").get<int>());
    for (const auto& term : j.at("terms")) {
        MultiPoly::Exponents e;
        for (const auto& k : term.at("exponents")) e.push_back(k.get<int>());
        p.add_term(e, term.at("coeff").get<double>());
    }
    return p;
}

}  // namespace orbitmetric
