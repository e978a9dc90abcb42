#include "opfree/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace opfree {

Json matrix_to_json(const Eigen::MatrixXcd& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return Json{{"dim", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
    const Eigen::Index rows = j.at("dim").get<Eigen::Index>();
    const Eigen::Index cols = j.contains("cols") ? j.at("cols").get<Eigen::Index>() : rows;
    const auto& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw ValidationError("matrix_from_json: entry count mismatch");
    Eigen::MatrixXcd m(rows, cols);
    Eigen::Index pos = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = entries.at(pos++);
            m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

Json multilinear_to_json(const MultilinearMap& m) {
    Json table = Json::array();
    for (std::size_t i = 0; i < m.table_size(); ++i) {
        Json entries = Json::array();
        const BElement& e = m.at(i);
        for (Eigen::Index r = 0; r < e.rows(); ++r)
            for (Eigen::Index c = 0; c < e.cols(); ++c)
                entries.push_back({e(r, c).real(), e(r, c).imag()});
        table.push_back(entries);
    }
    return Json{{"dim", m.dim()}, {"arity", m.arity()}, {"table", table}};
}

MultilinearMap multilinear_from_json(const Json& j) {
    const int dim = j.at("dim").get<int>();
    const int arity = j.at("arity").get<int>();
    MultilinearMap m(dim, arity);
    const auto& table = j.at("table");
    if (table.size() != m.table_size())
        throw ValidationError("multilinear_from_json: table size mismatch");
    for (std::size_t i = 0; i < m.table_size(); ++i) {
        const auto& entries = table.at(i);
        if (static_cast<int>(entries.size()) != dim * dim)
            throw ValidationError("multilinear_from_json: entry count mismatch");
        BElement e(dim, dim);
        int pos = 0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                const auto& x = entries.at(pos++);
                e(r, c) = Complex(x.at(0).get<double>(), x.at(1).get<double>());
            }
        m.at(i) = e;
    }
    return m;
}

namespace {

Json maps_to_json(const std::vector<MultilinearMap>& maps) {
    Json arr = Json::array();
    for (const auto& m : maps) arr.push_back(multilinear_to_json(m));
    return arr;
}

std::vector<MultilinearMap> maps_from_json(const Json& j) {
    std::vector<MultilinearMap> maps;
    for (const auto& m : j) maps.push_back(multilinear_from_json(m));
    return maps;
}

}  // namespace

Json moments_to_json(const TruncatedMoments& mu) {
    return Json{{"dim", mu.dim}, {"order", mu.order}, {"bound", mu.bound},
                {"moments", maps_to_json(mu.maps)}};
}

TruncatedMoments moments_from_json(const Json& j) {
    TruncatedMoments mu;
    mu.dim = j.at("dim").get<int>();
    mu.order = j.at("order").get<int>();
    mu.bound = j.at("bound").get<double>();
    mu.maps = maps_from_json(j.at("moments"));
    if (static_cast<int>(mu.maps.size()) != mu.order)
        throw ValidationError("moments_from_json: order mismatch");
    return mu;
}

Json cumulants_to_json(const CumulantSequence& k) {
    return Json{{"dim", k.dim}, {"order", k.order}, {"bound", k.bound},
                {"cumulants", maps_to_json(k.maps)}};
}

CumulantSequence cumulants_from_json(const Json& j) {
    CumulantSequence k;
    k.dim = j.at("dim").get<int>();
    k.order = j.at("order").get<int>();
    k.bound = j.at("bound").get<double>();
    k.maps = maps_from_json(j.at("cumulants"));
    if (static_cast<int>(k.maps.size()) != k.order)
        throw ValidationError("cumulants_from_json: order mismatch");
    return k;
}

Json realized_to_json(const RealizedModel& m) {
    return Json{{"dim", m.dim}, {"multiplicity", m.multiplicity},
                {"matrix", matrix_to_json(m.a)}};
}

RealizedModel realized_from_json(const Json& j) {
    return make_realized(j.at("dim").get<int>(), j.at("multiplicity").get<int>(),
                         matrix_from_json(j.at("matrix")));
}

Json partition_to_json(const NCPartition& p) {
    Json blocks = Json::array();
    for (const auto& b : p.blocks) {
        Json bl = Json::array();
        for (int e : b) bl.push_back(e + 1);
        blocks.push_back(bl);
    }
    return Json{{"n", p.n}, {"blocks", blocks}};
}

NCPartition partition_from_json(const Json& j) {
    NCPartition p;
    p.n = j.at("n").get<int>();
    for (const auto& b : j.at("blocks")) {
        std::vector<int> block;
        for (const auto& e : b) block.push_back(e.get<int>() - 1);
        p.blocks.push_back(std::move(block));
    }
    canonicalize_partition(p);
    return p;
}

Json instance_to_json(const SteinitzInstance& inst) {
    Json vectors = Json::array();
    for (const auto& v : inst.vectors) {
        Json vec = Json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) vec.push_back(v(i));
        vectors.push_back(vec);
    }
    return Json{{"n_dim", inst.n_dim}, {"vectors", vectors}};
}

SteinitzInstance instance_from_json(const Json& j) {
    std::vector<Eigen::VectorXd> vectors;
    for (const auto& vj : j.at("vectors")) {
        Eigen::VectorXd v(vj.size());
        for (std::size_t i = 0; i < vj.size(); ++i) v(static_cast<Eigen::Index>(i)) = vj.at(i).get<double>();
        vectors.push_back(std::move(v));
    }
    return make_instance(std::move(vectors));
}

Json selection_to_json(const SelectionResult& r) {
    Json idx = Json::array();
    for (int i : r.indices) idx.push_back(i + 1);
    return Json{{"mode", r.is_permutation ? "permutation" : "subset"},
                {"indices", idx},
                {"certified_bound", r.certified_bound},
                {"achieved_deviation", r.achieved_deviation},
                {"effective_dim", r.effective_dim}};
}

Json row_report_to_json(const RowReport& r) {
    Json sigma = Json::array();
    for (int i : r.sigma) sigma.push_back(i + 1);
    return Json{{"row", r.row},
                {"n_i", r.n_i},
                {"sigma", sigma},
                {"sigma_size", r.sigma.size()},
                {"steinitz_eps", r.steinitz_eps},
                {"phi_deviation", r.phi_deviation},
                {"phi_budget", r.phi_budget},
                {"transform_distance", r.transform_distance},
                {"transform_budget", r.transform_budget},
                {"cumulant_distance", r.cumulant_distance},
                {"cumulant_budget", r.cumulant_budget},
                {"level2_distance", r.level2_distance},
                {"level2_budget", r.level2_budget},
                {"verdict", r.verdict},
                {"error", r.error}};
}

Json experiment_to_json(const ExperimentReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back(row_report_to_json(row));
    return Json{{"p", r.p},
                {"t", r.t},
                {"tail_order", r.tail_order},
                {"rows", rows},
                {"reconvolution_error", r.reconvolution_error},
                {"reconvolution_budget", r.reconvolution_budget},
                {"pass", r.pass}};
}

std::vector<Eigen::VectorXd> read_vectors_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vector file: " + path);
    std::vector<Eigen::VectorXd> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
        for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
        out.push_back(std::move(v));
    }
    return out;
}

void write_vectors_csv(const std::string& path, const std::vector<Eigen::VectorXd>& vectors) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write vector file: " + path);
    out.precision(17);
    for (const auto& v : vectors) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (i) out << ",";
            out << v(i);
        }
        out << "\n";
    }
}

std::string json_pretty(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad JSON in ") + path + ": " + e.what());
    }
}

}  // namespace opfree
