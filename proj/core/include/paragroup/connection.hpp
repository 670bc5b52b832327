#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paragroup/graph.hpp"
#include "paragroup/report.hpp"

namespace paragroup {

using Complex = std::complex<double>;

/// One cell: four edge indices (into the id-sorted edge lists of the four
/// side graphs) closing a square. Corners: s(bottom)=s(left) in V0,
/// r(bottom)=s(right) in V1, r(left)=s(top) in V2, r(right)=r(top) in V3.
struct Cell {
    int bottom;
    int left;
    int right;
    int top;

    bool operator==(const Cell&) const = default;
};

/// Connection on a square of four bipartite graphs with identified corner
/// vertex classes, Perron-Frobenius weights on the corner vertices, and a
/// complex value per cell. Immutable after construction.
class ConnectionSquare {
public:
    ConnectionSquare(BipartiteGraph bottom, BipartiteGraph left, BipartiteGraph right,
                     BipartiteGraph top, std::map<std::string, double> weights,
                     std::vector<std::pair<Cell, Complex>> cells);

    const BipartiteGraph& bottom() const { return bottom_; }
    const BipartiteGraph& left() const { return left_; }
    const BipartiteGraph& right() const { return right_; }
    const BipartiteGraph& top() const { return top_; }

    /// Corner vertex classes; V0 in bottom.even order, V1 in bottom.odd
    /// order, V2 in left.odd order, V3 in right.odd order.
    const std::vector<std::string>& v0() const { return bottom_.even_vertices(); }
    const std::vector<std::string>& v1() const { return bottom_.odd_vertices(); }
    const std::vector<std::string>& v2() const { return left_.odd_vertices(); }
    const std::vector<std::string>& v3() const { return right_.odd_vertices(); }

    double mu(const std::string& v) const;
    const std::map<std::string, double>& weights() const { return mu_; }
    /// Perron-Frobenius eigenvalue of the bottom (== top) graph.
    double beta() const { return beta_bottom_; }
    double beta_left() const { return beta_left_; }

    Complex cell(int b, int l, int r, int t) const;
    Complex cell(const Cell& c) const { return cell(c.bottom, c.left, c.right, c.top); }
    /// Cells in canonical order (lexicographic in (bottom,left,right,top)).
    const std::vector<std::pair<Cell, Complex>>& cells() const { return cells_; }

    /// Corner names of a cell: {s(bottom), r(bottom), r(left), r(right)}.
    std::array<std::string, 4> corners(const Cell& c) const;

    bool all_sides_equal() const;
    /// All sides equal and even/odd vertex name sets coincide, so that edges
    /// chain into paths.
    bool self_composable() const;

    /// Set by builders after passing check_biunitarity.
    std::optional<double> verified_tol;

private:
    BipartiteGraph bottom_, left_, right_, top_;
    std::map<std::string, double> mu_;
    double beta_bottom_ = 0.0, beta_left_ = 0.0;
    std::vector<std::pair<Cell, Complex>> cells_;
    std::vector<Complex> dense_;  // direct 4-index table when small enough
    std::uint64_t stride_l_ = 0, stride_r_ = 0, stride_t_ = 0;
    bool use_dense_ = false;

    void validate() const;
};

enum class RenormMode { horizontal, vertical, both };

/// Unitarity of the corner-pair matrices of the connection and of its
/// horizontally renormalized family. residual = max deviation from the two
/// Gram identities over all corner pairs; a row/column count mismatch is a
/// structural failure.
CheckReport check_biunitarity(const ConnectionSquare& w, double tol);

/// Reflect (left-right for horizontal, bottom-top for vertical), conjugate,
/// and scale by sqrt(mu(bl) mu(tr) / (mu(br) mu(tl))) of the original cell.
/// `both` is the 180-degree rotation; the two weight factors cancel and no
/// conjugation remains.
ConnectionSquare renormalize(const ConnectionSquare& w, RenormMode mode);

/// Biunitary connection on the A_n diagram (vertices a, b, c, ...):
/// W(x,y,z,w) = e^{i phi} d_{y,z} + e^{-i phi} d_{x,w} sqrt(mu(y)mu(z))/mu(x)
/// with 2 cos(2 phi) = -beta.
ConnectionSquare build_dynkin_connection(int n);

struct Irrep {
    int dim = 1;
    std::vector<Eigen::MatrixXcd> matrices;  // one unitary per group element
};

struct GroupData {
    std::string name;
    std::vector<std::string> elements;
    std::vector<std::vector<int>> table;  // table[i][j] = index of g_i * g_j
    std::vector<Irrep> irreps;

    int order() const { return static_cast<int>(elements.size()); }
    int identity() const;
};

/// Group axioms, homomorphism/unitarity of the irreps, sum of dim^2 = |G|.
void validate_group(const GroupData& g, double tol = 1e-12);

GroupData cyclic_group(int n);
GroupData symmetric_group_3();

/// Flat connection of the group subfactor: V0 = group elements, V1 = V2 =
/// a single midpoint, V3 = irreducible representations; cell at (g, pi, i, j)
/// is the matrix entry pi(g)_{j,i}. The horizontally renormalized family is
/// the sqrt(dim/|G|)-scaled Fourier matrix of the group.
ConnectionSquare build_group_connection(const GroupData& g);

/// Per-side unitaries acting on families of parallel edges, keyed by the
/// (even, odd) endpoint pair. Missing families default to the identity.
struct GaugeSet {
    using Family = std::map<std::pair<std::string, std::string>, Eigen::MatrixXcd>;
    Family bottom, left, right, top;
};

ConnectionSquare gauge_transform(const ConnectionSquare& w, const GaugeSet& gauges);

/// Generalized Yang-Baxter equation for a self-composable connection: for
/// every hexagon boundary (six vertices, six edges) the two three-cell state
/// sums over the internal vertex and its three edges agree. residual =
/// max |LHS - RHS| over boundaries.
CheckReport check_gybe(const ConnectionSquare& y, double tol);

/// Random biunitary connection on a self-composable graph, found by
/// alternating polar projections of the two unitarity families from seeded
/// random cells. Throws when the iteration does not converge.
ConnectionSquare build_random_biunitary(const BipartiteGraph& k, const PFData& pf,
                                        std::uint64_t seed, int max_iter = 4000);

}  // namespace paragroup
