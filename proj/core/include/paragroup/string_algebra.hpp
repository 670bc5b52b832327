#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "paragroup/state_sum.hpp"

namespace paragroup {

/// Element of the string algebra at a lattice point: a complex matrix per
/// endpoint vertex, in the canonical path basis of that point (all paths
/// from the base vertex along the direction-sorted word).
struct StringElement {
    LatticePoint point;
    std::vector<Eigen::MatrixXcd> blocks;

    StringElement& operator+=(const StringElement& o);
    StringElement& operator-=(const StringElement& o);
    StringElement& operator*=(Complex c);
};

StringElement operator+(StringElement a, const StringElement& b);
StringElement operator-(StringElement a, const StringElement& b);
StringElement operator*(Complex c, StringElement x);

/// A set of string algebra elements realized in a common ambient algebra.
struct AlgebraView {
    LatticePoint point;
    std::vector<std::pair<int, int>> block_dims;  // (endpoint vertex, block size)
    std::vector<StringElement> basis;             // orthonormal for tr(a* b)

    int dimension() const { return static_cast<int>(basis.size()); }
};

/// String algebras of a self-composable connection: elements, trace,
/// embeddings, conditional expectations, and the commuting-square checks.
class StringModel {
public:
    explicit StringModel(ConnectionSquare y, int cap = 4096);

    PathModel& paths() { return paths_; }
    const ConnectionSquare& connection() const { return paths_.connection(); }

    std::vector<std::pair<int, int>> block_dims(const LatticePoint& n);
    StringElement zero(const LatticePoint& n);
    StringElement identity(const LatticePoint& n);
    /// (xi, eta) with xi, eta the a-th and b-th canonical path ending at q.
    StringElement matrix_unit(const LatticePoint& n, int q, int a, int b);
    StringElement random_element(const LatticePoint& n, std::uint64_t seed);

    StringElement multiply(const StringElement& x, const StringElement& y) const;
    StringElement adjoint(const StringElement& x) const;

    /// tr(xi, eta) = delta_{xi,eta} beta^{-|n|} mu(r(xi)), normalized so that
    /// tr(identity) = 1. beta here is the PF eigenvalue of K.
    Complex trace(const StringElement& x);
    Complex inner(const StringElement& a, const StringElement& b);  // tr(a* b)
    double trace_norm(const StringElement& x);
    double frobenius_norm(const StringElement& x) const;

    /// (xi, eta) -> sum_gamma (xi.gamma, eta.gamma), re-expressed in the
    /// canonical basis of n + e_dir.
    StringElement embed(const StringElement& x, int dir);
    /// Trace-preserving conditional expectation dropping one `dir` leg.
    StringElement cond_expect(const StringElement& x, int dir);
    StringElement embed_to(const StringElement& x, LatticePoint target);
    StringElement expect_to(const StringElement& x, LatticePoint target);

    /// Commuting square at n in directions i != j: operator norm of the Choi
    /// matrix of E_{n+e_j,i} o embed_j - embed_j o E_{n,i} on A_{n+e_i}.
    CheckReport check_commuting_square(const LatticePoint& n, int i, int j, double tol);

    /// Orthonormal basis of the *-algebra generated by the embedded images of
    /// the A_pt inside the ambient algebra (span closure under products).
    AlgebraView join_algebras(const std::vector<LatticePoint>& pts, LatticePoint ambient,
                              double rank_tol = 1e-10);
    /// join of the corner algebras A_{n e_i}, i < s, inside A_{n(1,..,1)}.
    AlgebraView corner_join(int n, int s, double rank_tol = 1e-10);

    /// Max commutator norm between the embedded images of A_{n e_i} and
    /// A_{m e_j}; a finite-level flatness certificate.
    CheckReport check_flat_commutation(int n, int m, int i, int j, double tol);

    /// Commuting square of the joins: E from A_{(n+1)(1..1)} to A_{n(1..1)}
    /// maps the level-(n+1) corner join into the level-n one and agrees there
    /// with the trace projection.
    CheckReport check_multileg_square(int n, int s, double tol);

    /// j-th floor of the intermediate tower: the square of
    /// A_{n(e_0+..+e_{j-1})} v A_{n e_j} inside A_{n(e_0+..+e_j)} and its
    /// n+1 counterpart.
    CheckReport check_floor_square(int n, int j, int s, double tol);

private:
    PathModel paths_;

    StringElement conjugate_by_transport(const TransportMatrix& t, const StringElement& x,
                                         LatticePoint new_point);
    StringElement project(const std::vector<StringElement>& onb, const StringElement& x);
    /// Residual of the generic commuting square of joins inside `ambient`.
    CheckReport check_join_square(const std::vector<LatticePoint>& top_pts_small,
                                  const std::vector<LatticePoint>& top_pts_big,
                                  const LatticePoint& small_pt, const LatticePoint& ambient,
                                  double tol, const char* name);
};

}  // namespace paragroup
