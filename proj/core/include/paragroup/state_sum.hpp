#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <map>
#include <vector>

#include "paragroup/connection.hpp"
#include "paragroup/lattice.hpp"
#include "paragroup/report.hpp"

namespace paragroup {

/// All length-m edge chains of a self-composable graph rooted at the start
/// vertex, in lexicographic edge-index order, grouped by endpoint.
struct PathBasis {
    int length = 0;
    std::vector<std::vector<std::uint16_t>> paths;
    std::vector<int> endpoint;                 // even-class vertex index
    std::vector<std::vector<int>> by_endpoint; // global indices, ascending
    std::vector<int> block_pos;                // local index within the block

    int size() const { return static_cast<int>(paths.size()); }
    int find(const std::vector<std::uint16_t>& p) const;  // -1 when absent
};

/// Unitary identification of the path bases along two lattice words, stored
/// as one block per endpoint vertex.
struct TransportMatrix {
    std::vector<int> from_word, to_word;
    std::vector<Eigen::MatrixXcd> blocks;

    double unitarity_residual() const;
    double max_abs_diff(const TransportMatrix& other) const;
    std::pair<double, double> singular_value_range() const;
};

struct GramReport {
    double min_singular = 1.0;
    double max_singular = 1.0;
    int dimension = 0;

    CheckReport report(double tol) const;
};

/// Path spaces and transports of a verified self-composable connection.
/// Bases depend only on the word length, so transports along words of equal
/// length act on one shared basis. Elementary flips are cached per
/// (length, position).
class PathModel {
public:
    explicit PathModel(ConnectionSquare y, int cap = 4096);

    const ConnectionSquare& connection() const { return y_; }
    const BipartiteGraph& graph() const { return y_.bottom(); }
    int start_vertex() const { return start_; }
    int vertex_count() const { return nv_; }
    int cap() const { return cap_; }
    /// PF eigenvalue of K (the square of the base connection's eigenvalue).
    double beta() const { return y_.beta(); }
    double mu(int v) const { return mu_[v]; }
    int edge_src(int e) const { return src_[e]; }
    int edge_dst(int e) const { return dst_[e]; }

    const PathBasis& basis(int length);
    /// append_index(len)[path][edge] = index of path.edge in basis(len+1),
    /// or -1 when the edge does not continue the path.
    const std::vector<std::vector<int>>& append_index(int length);

    TransportMatrix identity_transport(int length);
    /// Single square flip at position k (word letters at k, k+1 must differ).
    TransportMatrix elementary_transport(const std::vector<int>& word, int k);
    /// Product of elementary transports along `moves` (default: one minimal
    /// sorting sequence).
    TransportMatrix transport(const std::vector<int>& from, const std::vector<int>& to,
                              const std::vector<int>* moves = nullptr);
    TransportMatrix transport(const LatticePath& from, const LatticePath& to,
                              const std::vector<int>* moves = nullptr);

    /// Max pairwise deviation of the transports along every minimal swap
    /// sequence from `from` to `to`.
    CheckReport check_well_defined(const std::vector<int>& from, const std::vector<int>& to,
                                   double tol, std::size_t route_cap = 4096);

    /// Singular value range of the transport (the Gram matrix of the
    /// conjugate-linear path pairing).
    GramReport gram_report(const std::vector<int>& from, const std::vector<int>& to);

private:
    ConnectionSquare y_;
    int cap_;
    int nv_ = 0;
    int start_ = 0;
    std::vector<int> src_, dst_;
    std::vector<double> mu_;
    std::map<int, PathBasis> bases_;
    std::map<int, std::vector<std::vector<int>>> appends_;
    std::map<std::pair<int, int>, std::vector<Eigen::SparseMatrix<Complex>>> flips_;

    /// Ascending-orientation flip blocks at (length, pos); the descending
    /// transport is the adjoint.
    const std::vector<Eigen::SparseMatrix<Complex>>& flip(int length, int pos);
};

}  // namespace paragroup
