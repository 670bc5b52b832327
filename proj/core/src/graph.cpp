#include "paragroup/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace paragroup {

BipartiteGraph::BipartiteGraph(std::vector<std::string> even,
                               std::vector<std::string> odd,
                               std::vector<GraphEdge> edges,
                               std::optional<std::string> base)
    : even_(std::move(even)), odd_(std::move(odd)), edges_(std::move(edges)),
      base_(std::move(base)) {
    std::sort(edges_.begin(), edges_.end(),
              [](const GraphEdge& a, const GraphEdge& b) { return a.id < b.id; });
    for (size_t i = 0; i < even_.size(); ++i) {
        if (!even_idx_.emplace(even_[i], static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate even vertex: " + even_[i]);
    }
    for (size_t i = 0; i < odd_.size(); ++i) {
        if (!odd_idx_.emplace(odd_[i], static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate odd vertex: " + odd_[i]);
    }
    at_even_.resize(even_.size());
    at_odd_.resize(odd_.size());
    for (size_t i = 0; i < edges_.size(); ++i) {
        const GraphEdge& e = edges_[i];
        if (!edge_idx_.emplace(e.id, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate edge id: " + e.id);
        auto ev = even_idx_.find(e.even);
        auto ov = odd_idx_.find(e.odd);
        if (ev == even_idx_.end() || ov == odd_idx_.end())
            throw std::invalid_argument("edge " + e.id + " has unknown endpoint");
        edge_even_.push_back(ev->second);
        edge_odd_.push_back(ov->second);
        at_even_[ev->second].push_back(static_cast<int>(i));
        at_odd_[ov->second].push_back(static_cast<int>(i));
    }
    if (base_ && !even_idx_.count(*base_))
        throw std::invalid_argument("base vertex " + *base_ + " is not an even vertex");
}

int BipartiteGraph::even_index(const std::string& name) const {
    auto it = even_idx_.find(name);
    return it == even_idx_.end() ? -1 : it->second;
}

int BipartiteGraph::odd_index(const std::string& name) const {
    auto it = odd_idx_.find(name);
    return it == odd_idx_.end() ? -1 : it->second;
}

int BipartiteGraph::edge_index(const std::string& id) const {
    auto it = edge_idx_.find(id);
    return it == edge_idx_.end() ? -1 : it->second;
}

Eigen::MatrixXd BipartiteGraph::adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(even_.size(), odd_.size());
    for (size_t i = 0; i < edges_.size(); ++i) a(edge_even_[i], edge_odd_[i]) += 1.0;
    return a;
}

bool BipartiteGraph::connected() const {
    if (even_.empty()) return false;
    size_t n = even_.size() + odd_.size();
    std::vector<bool> seen(n, false);
    std::queue<int> q;  // even vertices occupy [0, |even|), odd the rest
    q.push(0);
    seen[0] = true;
    size_t reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        bool is_even = v < static_cast<int>(even_.size());
        const auto& inc = is_even ? at_even_[v] : at_odd_[v - even_.size()];
        for (int e : inc) {
            int w = is_even ? static_cast<int>(even_.size()) + edge_odd_[e] : edge_even_[e];
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                q.push(w);
            }
        }
    }
    return reached == n;
}

bool BipartiteGraph::operator==(const BipartiteGraph& other) const {
    auto same_edges = [](const std::vector<GraphEdge>& a, const std::vector<GraphEdge>& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i].id != b[i].id || a[i].even != b[i].even || a[i].odd != b[i].odd)
                return false;
        return true;
    };
    return even_ == other.even_ && odd_ == other.odd_ && same_edges(edges_, other.edges_) &&
           base_ == other.base_;
}

BipartiteGraph transpose(const BipartiteGraph& g) {
    std::vector<GraphEdge> edges;
    edges.reserve(g.edges().size());
    for (const GraphEdge& e : g.edges()) edges.push_back({e.id, e.odd, e.even});
    return BipartiteGraph(g.odd_vertices(), g.even_vertices(), std::move(edges));
}

BipartiteGraph concat_graphs(const BipartiteGraph& g, const BipartiteGraph& h) {
    std::set<std::string> go(g.odd_vertices().begin(), g.odd_vertices().end());
    std::set<std::string> ho(h.odd_vertices().begin(), h.odd_vertices().end());
    if (go != ho)
        throw std::invalid_argument("concat_graphs: middle layers do not match");
    std::vector<GraphEdge> edges;
    for (const GraphEdge& e : g.edges())
        for (const GraphEdge& f : h.edges())
            if (e.odd == f.odd) edges.push_back({e.id + "|" + f.id, e.even, f.even});
    return BipartiteGraph(g.even_vertices(), h.even_vertices(), std::move(edges),
                          g.base_vertex());
}

double PFData::weight(const std::string& v) const {
    auto it = weights.find(v);
    if (it == weights.end()) throw std::out_of_range("no PF weight for vertex " + v);
    return it->second;
}

PFData perron_frobenius(const BipartiteGraph& g, double tol) {
    if (g.even_vertices().empty() || g.edges().empty())
        throw std::invalid_argument("perron_frobenius: empty graph");
    if (!g.connected())
        throw std::invalid_argument("perron_frobenius: graph is disconnected");

    Eigen::MatrixXd a = g.adjacency();
    Eigen::MatrixXd aat = a * a.transpose();
    // Even subsequence of power iteration on the symmetric adjacency,
    // started from the all-ones vector.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(a.rows());
    double lambda = 0.0;
    constexpr int kMaxIter = 200000;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
        Eigen::VectorXd y = aat * x;
        lambda = y.dot(x) / x.dot(x);
        y /= y.norm();
        double delta = (y - x).cwiseAbs().maxCoeff();
        x = y;
        if (delta < tol * 0.01 + 1e-16) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("perron_frobenius: power iteration did not converge");
    double beta = std::sqrt(lambda);
    Eigen::VectorXd y = a.transpose() * x / beta;

    PFData pf;
    pf.eigenvalue = beta;
    std::string base = g.base_vertex() ? *g.base_vertex() : g.even_vertices().front();
    double scale = x(g.even_index(base));
    for (size_t i = 0; i < g.even_vertices().size(); ++i)
        pf.weights[g.even_vertices()[i]] = x(i) / scale;
    for (size_t i = 0; i < g.odd_vertices().size(); ++i) {
        // Even/odd classes may share names (self-composable graphs); the PF
        // weights then coincide, so only insert what is missing.
        pf.weights.emplace(g.odd_vertices()[i], y(i) / scale);
    }
    double res = pf_residual(g, pf);
    if (res > tol * 100 + 1e-12)
        throw std::runtime_error("perron_frobenius: residual " + std::to_string(res) +
                                 " above tolerance");
    return pf;
}

double pf_residual(const BipartiteGraph& g, const PFData& pf) {
    Eigen::MatrixXd a = g.adjacency();
    Eigen::VectorXd x(a.rows()), y(a.cols());
    for (long i = 0; i < a.rows(); ++i) x(i) = pf.weight(g.even_vertices()[i]);
    for (long j = 0; j < a.cols(); ++j) y(j) = pf.weight(g.odd_vertices()[j]);
    double r1 = (a * y - pf.eigenvalue * x).cwiseAbs().maxCoeff();
    double r2 = (a.transpose() * x - pf.eigenvalue * y).cwiseAbs().maxCoeff();
    return std::max(r1, r2);
}

namespace {

void extend_path(const BipartiteGraph& g, GraphPath& cur, bool next_forward, int at,
                 int remaining, const std::string& q, std::vector<GraphPath>& out) {
    if (remaining == 0) {
        const std::string& name =
            cur.forward.empty()
                ? cur.source
                : (cur.forward.back() ? g.odd_vertices()[g.odd_of(cur.edges.back())]
                                      : g.even_vertices()[g.even_of(cur.edges.back())]);
        if (name == q) {
            GraphPath p = cur;
            p.range = name;
            out.push_back(std::move(p));
        }
        return;
    }
    const auto& inc = next_forward ? g.edges_at_even(at) : g.edges_at_odd(at);
    for (int e : inc) {
        cur.edges.push_back(e);
        cur.forward.push_back(next_forward);
        int next_at = next_forward ? g.odd_of(e) : g.even_of(e);
        extend_path(g, cur, !next_forward, next_at, remaining - 1, q, out);
        cur.edges.pop_back();
        cur.forward.pop_back();
    }
}

}  // namespace

std::vector<GraphPath> enumerate_paths(const BipartiteGraph& g, const std::string& p,
                                       const std::string& q, int len) {
    std::vector<GraphPath> out;
    int pe = g.even_index(p);
    int po = g.odd_index(p);
    if (pe < 0 && po < 0) return out;
    bool forward = pe >= 0;  // prefer the even class when the name is in both
    GraphPath cur;
    cur.source = p;
    extend_path(g, cur, forward, forward ? pe : po, len, q, out);
    return out;  // DFS over id-sorted incidence lists is already lexicographic
}

}  // namespace paragroup
