#include "paragroup/io.hpp"

#include <fstream>
#include <json.hpp>

namespace paragroup {

namespace {

using nlohmann::ordered_json;

ordered_json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_file(const ordered_json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << "\n";
}

template <typename Fn>
auto guarded(const std::string& path, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const IoError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    } catch (const std::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

ordered_json graph_to_json(const BipartiteGraph& g) {
    ordered_json j;
    j["even"] = g.even_vertices();
    j["odd"] = g.odd_vertices();
    ordered_json edges = ordered_json::array();
    for (const GraphEdge& e : g.edges())
        edges.push_back({{"id", e.id}, {"even", e.even}, {"odd", e.odd}});
    j["edges"] = std::move(edges);
    if (g.base_vertex()) j["base"] = *g.base_vertex();
    return j;
}

BipartiteGraph graph_from_json(const ordered_json& j) {
    std::vector<std::string> even = j.at("even").get<std::vector<std::string>>();
    std::vector<std::string> odd = j.at("odd").get<std::vector<std::string>>();
    std::vector<GraphEdge> edges;
    for (const auto& e : j.at("edges"))
        edges.push_back({e.at("id").get<std::string>(), e.at("even").get<std::string>(),
                         e.at("odd").get<std::string>()});
    std::optional<std::string> base;
    if (j.contains("base")) base = j.at("base").get<std::string>();
    return BipartiteGraph(std::move(even), std::move(odd), std::move(edges), std::move(base));
}

Eigen::MatrixXcd matrix_from_json(const ordered_json& j, int dim) {
    Eigen::MatrixXcd m(dim, dim);
    if (static_cast<int>(j.size()) != dim) throw IoError("matrix has wrong number of rows");
    for (int r = 0; r < dim; ++r) {
        const auto& row = j.at(r);
        if (static_cast<int>(row.size()) != dim) throw IoError("matrix has wrong row length");
        for (int c = 0; c < dim; ++c) {
            const auto& v = row.at(c);
            m(r, c) = Complex(v.at(0).get<double>(), v.at(1).get<double>());
        }
    }
    return m;
}

ordered_json matrix_to_json(const Eigen::MatrixXcd& m) {
    ordered_json rows = ordered_json::array();
    for (long r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (long c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

BipartiteGraph load_graph(const std::string& path) {
    return guarded(path, [&] { return graph_from_json(read_file(path)); });
}

void save_graph(const BipartiteGraph& g, const std::string& path) {
    write_file(graph_to_json(g), path);
}

ConnectionSquare load_connection(const std::string& path) {
    return guarded(path, [&] {
        ordered_json j = read_file(path);
        BipartiteGraph bottom = graph_from_json(j.at("bottom"));
        BipartiteGraph left = graph_from_json(j.at("left"));
        BipartiteGraph right = graph_from_json(j.at("right"));
        BipartiteGraph top = graph_from_json(j.at("top"));
        std::map<std::string, double> weights;
        for (const auto& [k, v] : j.at("pf").at("weights").items())
            weights[k] = v.get<double>();
        std::vector<std::pair<Cell, Complex>> cells;
        for (const auto& c : j.at("cells")) {
            Cell cell{bottom.edge_index(c.at("bottom").get<std::string>()),
                      left.edge_index(c.at("left").get<std::string>()),
                      right.edge_index(c.at("right").get<std::string>()),
                      top.edge_index(c.at("top").get<std::string>())};
            if (cell.bottom < 0 || cell.left < 0 || cell.right < 0 || cell.top < 0)
                throw IoError(path + ": cell references an unknown edge id");
            cells.push_back({cell, Complex(c.at("re").get<double>(), c.at("im").get<double>())});
        }
        return ConnectionSquare(std::move(bottom), std::move(left), std::move(right),
                                std::move(top), std::move(weights), std::move(cells));
    });
}

void save_connection(const ConnectionSquare& w, const std::string& path) {
    ordered_json j;
    j["bottom"] = graph_to_json(w.bottom());
    j["left"] = graph_to_json(w.left());
    j["right"] = graph_to_json(w.right());
    j["top"] = graph_to_json(w.top());
    ordered_json weights;
    for (const auto& [k, v] : w.weights()) weights[k] = v;
    j["pf"] = {{"eigenvalue", w.beta()}, {"weights", std::move(weights)}};
    ordered_json cells = ordered_json::array();
    for (const auto& [c, v] : w.cells())
        cells.push_back({{"bottom", w.bottom().edges()[c.bottom].id},
                         {"left", w.left().edges()[c.left].id},
                         {"right", w.right().edges()[c.right].id},
                         {"top", w.top().edges()[c.top].id},
                         {"re", v.real()},
                         {"im", v.imag()}});
    j["cells"] = std::move(cells);
    write_file(j, path);
}

GroupData load_group(const std::string& path) {
    return guarded(path, [&] {
        ordered_json j = read_file(path);
        GroupData g;
        g.name = j.value("name", "group");
        g.elements = j.at("elements").get<std::vector<std::string>>();
        g.table = j.at("table").get<std::vector<std::vector<int>>>();
        for (const auto& rep : j.at("irreps")) {
            Irrep ir;
            ir.dim = rep.at("dim").get<int>();
            for (const auto& m : rep.at("matrices"))
                ir.matrices.push_back(matrix_from_json(m, ir.dim));
            g.irreps.push_back(std::move(ir));
        }
        validate_group(g);
        return g;
    });
}

void save_group(const GroupData& g, const std::string& path) {
    ordered_json j;
    j["name"] = g.name;
    j["elements"] = g.elements;
    j["table"] = g.table;
    ordered_json irreps = ordered_json::array();
    for (const Irrep& ir : g.irreps) {
        ordered_json mats = ordered_json::array();
        for (const auto& m : ir.matrices) mats.push_back(matrix_to_json(m));
        irreps.push_back({{"dim", ir.dim}, {"matrices", std::move(mats)}});
    }
    j["irreps"] = std::move(irreps);
    write_file(j, path);
}

FusionRing load_fusion(const std::string& path) {
    return guarded(path, [&] {
        ordered_json j = read_file(path);
        FusionRing f;
        f.name = j.value("name", "fusion");
        f.labels = j.at("labels").get<std::vector<std::string>>();
        int l = f.label_count();
        f.unit = f.label_index(j.at("unit").get<std::string>());
        if (f.unit < 0) throw IoError(path + ": unit label not in labels");
        f.dims.assign(l, 0.0);
        for (const auto& [k, v] : j.at("dims").items()) {
            int idx = f.label_index(k);
            if (idx < 0) throw IoError(path + ": dims key " + k + " not in labels");
            f.dims[idx] = v.get<double>();
        }
        f.n.assign(static_cast<size_t>(l) * l * l, 0);
        for (const auto& entry : j.at("N")) {
            if (entry.size() != 4) throw IoError(path + ": N entries must be [i,j,k,count]");
            int i = f.label_index(entry.at(0).get<std::string>());
            int jj = f.label_index(entry.at(1).get<std::string>());
            int k = f.label_index(entry.at(2).get<std::string>());
            if (i < 0 || jj < 0 || k < 0)
                throw IoError(path + ": N entry references unknown label");
            f.fusion_ref(i, jj, k) = entry.at(3).get<int>();
        }
        CheckReport rep = validate_fusion(f);
        if (!rep.structural_ok) throw IoError(path + ": invalid fusion ring: " + rep.detail);
        return f;
    });
}

void save_fusion(const FusionRing& f, const std::string& path) {
    ordered_json j;
    j["name"] = f.name;
    j["labels"] = f.labels;
    j["unit"] = f.labels[f.unit];
    ordered_json dims;
    for (int i = 0; i < f.label_count(); ++i) dims[f.labels[i]] = f.dims[i];
    j["dims"] = std::move(dims);
    ordered_json n = ordered_json::array();
    for (int i = 0; i < f.label_count(); ++i)
        for (int jj = 0; jj < f.label_count(); ++jj)
            for (int k = 0; k < f.label_count(); ++k)
                if (f.fusion(i, jj, k) != 0)
                    n.push_back({f.labels[i], f.labels[jj], f.labels[k], f.fusion(i, jj, k)});
    j["N"] = std::move(n);
    write_file(j, path);
}

ConnectionSquare resolve_connection(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        auto c = builtin_connection(spec.substr(8));
        if (!c) throw IoError("unknown builtin connection " + spec.substr(8));
        return std::move(*c);
    }
    if (spec.rfind("group:", 0) == 0)
        return build_group_connection(load_group(spec.substr(6)));
    return load_connection(spec);
}

FusionRing resolve_fusion(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        auto f = builtin_fusion(spec.substr(8));
        if (!f) throw IoError("unknown builtin fusion ring " + spec.substr(8));
        return std::move(*f);
    }
    return load_fusion(spec);
}

}  // namespace paragroup
