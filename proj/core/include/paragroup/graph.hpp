#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace paragroup {

struct GraphEdge {
    std::string id;
    std::string even;
    std::string odd;
};

/// Finite bipartite multigraph with named vertices and uniquely named edges.
/// Parallel edges are allowed and distinguished by id. The even and odd vertex
/// sets may share names (a graph with even == odd as name sets is
/// "self-composable" and its paths can be chained).
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(std::vector<std::string> even, std::vector<std::string> odd,
                   std::vector<GraphEdge> edges,
                   std::optional<std::string> base = std::nullopt);

    const std::vector<std::string>& even_vertices() const { return even_; }
    const std::vector<std::string>& odd_vertices() const { return odd_; }
    /// Edges sorted by id; indices below refer to this order.
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::optional<std::string>& base_vertex() const { return base_; }

    int even_index(const std::string& name) const;
    int odd_index(const std::string& name) const;
    int edge_index(const std::string& id) const;

    int even_of(int edge) const { return edge_even_[edge]; }
    int odd_of(int edge) const { return edge_odd_[edge]; }

    const std::vector<int>& edges_at_even(int v) const { return at_even_[v]; }
    const std::vector<int>& edges_at_odd(int v) const { return at_odd_[v]; }

    /// Edge-count matrix, rows = even vertices, cols = odd vertices.
    Eigen::MatrixXd adjacency() const;
    bool connected() const;

    bool operator==(const BipartiteGraph& other) const;

private:
    std::vector<std::string> even_, odd_;
    std::vector<GraphEdge> edges_;
    std::optional<std::string> base_;
    std::map<std::string, int> even_idx_, odd_idx_, edge_idx_;
    std::vector<int> edge_even_, edge_odd_;
    std::vector<std::vector<int>> at_even_, at_odd_;
};

/// Same edges with the even/odd roles exchanged. Edge ids are kept.
BipartiteGraph transpose(const BipartiteGraph& g);

/// Concatenation through the shared odd layer: one edge per pair of a g-edge
/// and an h-edge ending at the same odd vertex, traversing h backwards.
/// The result has even class even(g), odd class even(h); ids record the pair
/// as "<id_g>|<id_h>".
BipartiteGraph concat_graphs(const BipartiteGraph& g, const BipartiteGraph& h);

/// Perron-Frobenius data of a connected bipartite graph: the top eigenvalue
/// and a strictly positive weight per vertex, normalized to 1 at the base
/// vertex (first even vertex when no base is set).
struct PFData {
    double eigenvalue = 0.0;
    std::map<std::string, double> weights;

    double weight(const std::string& v) const;
};

PFData perron_frobenius(const BipartiteGraph& g, double tol = 1e-13);

/// Max-norm residual of the eigen equations A mu = beta mu on both classes.
double pf_residual(const BipartiteGraph& g, const PFData& pf);

/// Walk in the undirected bipartite graph: edges with a traversal flag.
struct GraphPath {
    std::vector<int> edges;
    std::vector<bool> forward;  // true: even -> odd
    std::string source;
    std::string range;

    int length() const { return static_cast<int>(edges.size()); }
};

/// All walks of exact length `len` from p to q, alternating parity, starting
/// forward when p is an even vertex. Lexicographic in the edge index
/// sequence.
std::vector<GraphPath> enumerate_paths(const BipartiteGraph& g,
                                       const std::string& p,
                                       const std::string& q, int len);

}  // namespace paragroup
