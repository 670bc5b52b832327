#include "paragroup/string_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"

namespace paragroup {

namespace {

void check_same_shape(const StringElement& a, const StringElement& b) {
    if (a.point != b.point || a.blocks.size() != b.blocks.size())
        throw std::invalid_argument("string elements live at different lattice points");
}

LatticePoint padded(LatticePoint p, size_t size) {
    if (p.size() < size) p.resize(size, 0);
    return p;
}

}  // namespace

StringElement& StringElement::operator+=(const StringElement& o) {
    check_same_shape(*this, o);
    for (size_t v = 0; v < blocks.size(); ++v) blocks[v] += o.blocks[v];
    return *this;
}

StringElement& StringElement::operator-=(const StringElement& o) {
    check_same_shape(*this, o);
    for (size_t v = 0; v < blocks.size(); ++v) blocks[v] -= o.blocks[v];
    return *this;
}

StringElement& StringElement::operator*=(Complex c) {
    for (auto& b : blocks) b *= c;
    return *this;
}

StringElement operator+(StringElement a, const StringElement& b) { return a += b; }
StringElement operator-(StringElement a, const StringElement& b) { return a -= b; }
StringElement operator*(Complex c, StringElement x) { return x *= c; }

StringModel::StringModel(ConnectionSquare y, int cap) : paths_(std::move(y), cap) {}

std::vector<std::pair<int, int>> StringModel::block_dims(const LatticePoint& n) {
    const PathBasis& b = paths_.basis(point_norm(n));
    std::vector<std::pair<int, int>> dims;
    for (int v = 0; v < paths_.vertex_count(); ++v)
        dims.push_back({v, static_cast<int>(b.by_endpoint[v].size())});
    return dims;
}

StringElement StringModel::zero(const LatticePoint& n) {
    const PathBasis& b = paths_.basis(point_norm(n));
    StringElement x;
    x.point = n;
    for (int v = 0; v < paths_.vertex_count(); ++v) {
        int d = static_cast<int>(b.by_endpoint[v].size());
        x.blocks.push_back(Eigen::MatrixXcd::Zero(d, d));
    }
    return x;
}

StringElement StringModel::identity(const LatticePoint& n) {
    StringElement x = zero(n);
    for (auto& b : x.blocks) b.setIdentity();
    return x;
}

StringElement StringModel::matrix_unit(const LatticePoint& n, int q, int a, int b) {
    StringElement x = zero(n);
    if (q < 0 || q >= static_cast<int>(x.blocks.size()) || a < 0 || b < 0 ||
        a >= x.blocks[q].rows() || b >= x.blocks[q].cols())
        throw std::invalid_argument("matrix_unit: index out of range");
    x.blocks[q](a, b) = 1.0;
    return x;
}

StringElement StringModel::random_element(const LatticePoint& n, std::uint64_t seed) {
    StringElement x = zero(n);
    detail::SplitMix rng(seed);
    for (auto& b : x.blocks)
        for (long i = 0; i < b.rows(); ++i)
            for (long j = 0; j < b.cols(); ++j) b(i, j) = Complex(rng.normal(), rng.normal());
    return x;
}

StringElement StringModel::multiply(const StringElement& x, const StringElement& y) const {
    check_same_shape(x, y);
    StringElement z = x;
    for (size_t v = 0; v < z.blocks.size(); ++v) z.blocks[v] = x.blocks[v] * y.blocks[v];
    return z;
}

StringElement StringModel::adjoint(const StringElement& x) const {
    StringElement z = x;
    for (size_t v = 0; v < z.blocks.size(); ++v) z.blocks[v] = x.blocks[v].adjoint().eval();
    return z;
}

Complex StringModel::trace(const StringElement& x) {
    int m = point_norm(x.point);
    double scale = std::pow(paths_.beta(), -m);
    Complex t(0, 0);
    for (size_t v = 0; v < x.blocks.size(); ++v)
        t += scale * paths_.mu(static_cast<int>(v)) * x.blocks[v].trace();
    return t;
}

Complex StringModel::inner(const StringElement& a, const StringElement& b) {
    check_same_shape(a, b);
    int m = point_norm(a.point);
    double scale = std::pow(paths_.beta(), -m);
    Complex t(0, 0);
    for (size_t v = 0; v < a.blocks.size(); ++v)
        t += scale * paths_.mu(static_cast<int>(v)) *
             a.blocks[v].conjugate().cwiseProduct(b.blocks[v]).sum();
    return t;
}

double StringModel::trace_norm(const StringElement& x) {
    return std::sqrt(std::max(0.0, inner(x, x).real()));
}

double StringModel::frobenius_norm(const StringElement& x) const {
    double s = 0;
    for (const auto& b : x.blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

StringElement StringModel::conjugate_by_transport(const TransportMatrix& t,
                                                  const StringElement& x,
                                                  LatticePoint new_point) {
    StringElement z;
    z.point = std::move(new_point);
    z.blocks.resize(x.blocks.size());
    for (size_t v = 0; v < x.blocks.size(); ++v)
        z.blocks[v] = t.blocks[v] * x.blocks[v] * t.blocks[v].adjoint();
    return z;
}

StringElement StringModel::embed(const StringElement& x, int dir) {
    int m = point_norm(x.point);
    const PathBasis& bm = paths_.basis(m);
    const PathBasis& bn = paths_.basis(m + 1);
    const auto& app = paths_.append_index(m);
    const BipartiteGraph& k = paths_.graph();

    LatticePoint target = add_unit(x.point, dir);
    StringElement z = zero(target);
    for (int q = 0; q < paths_.vertex_count(); ++q) {
        const auto& rows = bm.by_endpoint[q];
        const auto& blk = x.blocks[q];
        if (rows.empty()) continue;
        for (int e : k.edges_at_even(q)) {
            int tv = paths_.edge_dst(e);
            auto& out = z.blocks[tv];
            for (size_t a = 0; a < rows.size(); ++a) {
                int ia = app[rows[a]][e];
                for (size_t b = 0; b < rows.size(); ++b) {
                    if (blk(a, b) == Complex(0, 0)) continue;
                    int ib = app[rows[b]][e];
                    out(bn.block_pos[ia], bn.block_pos[ib]) += blk(a, b);
                }
            }
        }
    }
    std::vector<int> from = canonical_word(x.point);
    from.push_back(dir);
    std::vector<int> to = canonical_word(target);
    if (from == to) return z;
    TransportMatrix t = paths_.transport(from, to);
    return conjugate_by_transport(t, z, target);
}

StringElement StringModel::cond_expect(const StringElement& x, int dir) {
    LatticePoint p = x.point;
    if (dir < 0 || dir >= static_cast<int>(p.size()) || p[dir] < 1)
        throw std::invalid_argument("cond_expect: point has no leg in this direction");
    LatticePoint target = p;
    target[dir] -= 1;
    int m = point_norm(target);

    std::vector<int> from = canonical_word(p);
    std::vector<int> to = canonical_word(target);
    to.push_back(dir);
    StringElement z = x;
    if (from != to) {
        TransportMatrix t = paths_.transport(from, to);
        z = conjugate_by_transport(t, x, p);
    }

    const PathBasis& bm = paths_.basis(m);
    const auto& app = paths_.append_index(m);
    const PathBasis& bn = paths_.basis(m + 1);
    const BipartiteGraph& k = paths_.graph();
    double beta = paths_.beta();

    StringElement out = zero(target);
    for (int q = 0; q < paths_.vertex_count(); ++q) {
        const auto& rows = bm.by_endpoint[q];
        if (rows.empty()) continue;
        auto& ob = out.blocks[q];
        for (int e : k.edges_at_even(q)) {
            int tv = paths_.edge_dst(e);
            double w = paths_.mu(tv) / (beta * paths_.mu(q));
            const auto& zb = z.blocks[tv];
            for (size_t a = 0; a < rows.size(); ++a) {
                int ia = app[rows[a]][e];
                for (size_t b = 0; b < rows.size(); ++b) {
                    int ib = app[rows[b]][e];
                    ob(a, b) += w * zb(bn.block_pos[ia], bn.block_pos[ib]);
                }
            }
        }
    }
    return out;
}

StringElement StringModel::embed_to(const StringElement& x, LatticePoint target) {
    StringElement z = x;
    z.point = padded(z.point, target.size());
    for (size_t d = 0; d < target.size(); ++d) {
        if (z.point[d] > target[d])
            throw std::invalid_argument("embed_to: target below current point");
        while (z.point[d] < target[d]) z = embed(z, static_cast<int>(d));
    }
    return z;
}

StringElement StringModel::expect_to(const StringElement& x, LatticePoint target) {
    StringElement z = x;
    target = padded(std::move(target), z.point.size());
    for (size_t d = z.point.size(); d-- > 0;) {
        if (z.point[d] < target[d])
            throw std::invalid_argument("expect_to: target above current point");
        while (z.point[d] > target[d]) z = cond_expect(z, static_cast<int>(d));
    }
    return z;
}

// ---------------------------------------------------------------------------
// commuting square via the Choi matrix of the route difference

CheckReport StringModel::check_commuting_square(const LatticePoint& n, int i, int j,
                                                double tol) {
    if (i == j) throw std::invalid_argument("check_commuting_square: need i != j");
    int m = point_norm(n);
    LatticePoint ni = add_unit(n, i), nj = add_unit(n, j);
    LatticePoint amb = add_unit(ni, j);

    const PathBasis& bmid = paths_.basis(m + 1);
    const PathBasis& bamb = paths_.basis(m + 2);
    const auto& app = paths_.append_index(m + 1);
    const BipartiteGraph& k = paths_.graph();
    int nv = paths_.vertex_count();
    double beta = paths_.beta();

    // route 1: append j, transport to canonical(amb), transport to
    // canonical(n+e_j).i, strip the i leg
    std::vector<int> w_iota = canonical_word(ni);
    w_iota.push_back(j);
    TransportMatrix t_iota = paths_.transport(w_iota, canonical_word(amb));
    std::vector<int> w_e = canonical_word(nj);
    w_e.push_back(i);
    TransportMatrix t_e = paths_.transport(canonical_word(amb), w_e);
    std::vector<Eigen::MatrixXcd> u1(nv);
    for (int v = 0; v < nv; ++v) u1[v] = t_e.blocks[v] * t_iota.blocks[v];

    // route 2: strip the i leg at level n+e_i, then append j
    std::vector<int> w_e2 = canonical_word(n);
    w_e2.push_back(i);
    TransportMatrix t2e = paths_.transport(canonical_word(ni), w_e2);
    std::vector<int> w_i2 = canonical_word(n);
    w_i2.push_back(j);
    TransportMatrix t2i = paths_.transport(w_i2, canonical_word(nj));

    const PathBasis& bsmall = paths_.basis(m);
    const auto& app_small = paths_.append_index(m);

    CheckReport rep;
    rep.name = "commuting-square";
    rep.tol = tol;

    int ne = static_cast<int>(k.edges().size());
    for (int rb = 0; rb < nv; ++rb) {
        for (int cb = 0; cb < nv; ++cb) {
            long dr = static_cast<long>(bmid.by_endpoint[rb].size());
            long dc = static_cast<long>(bmid.by_endpoint[cb].size());
            if (dr == 0 || dc == 0) continue;
            std::vector<Eigen::MatrixXcd> ops;
            std::vector<double> sign;

            // route 1 Kraus: gamma_i from rb, gamma_j from cb, equal heads
            for (int gi = 0; gi < ne; ++gi) {
                if (paths_.edge_src(gi) != rb) continue;
                for (int gj = 0; gj < ne; ++gj) {
                    if (paths_.edge_src(gj) != cb) continue;
                    int head = paths_.edge_dst(gi);
                    if (paths_.edge_dst(gj) != head) continue;
                    double w = std::sqrt(paths_.mu(head) / (beta * paths_.mu(rb)));
                    Eigen::MatrixXcd a(dr, dc);
                    const auto& ub = u1[head];
                    for (long r = 0; r < dr; ++r) {
                        int ra = app[bmid.by_endpoint[rb][r]][gi];
                        for (long c = 0; c < dc; ++c) {
                            int ca = app[bmid.by_endpoint[cb][c]][gj];
                            a(r, c) = w * ub(bamb.block_pos[ra], bamb.block_pos[ca]);
                        }
                    }
                    ops.push_back(std::move(a));
                    sign.push_back(1.0);
                }
            }
            // route 2 Kraus: gamma_j into rb, gamma_i into cb, equal tails
            for (int gj = 0; gj < ne; ++gj) {
                if (paths_.edge_dst(gj) != rb) continue;
                for (int gi = 0; gi < ne; ++gi) {
                    if (paths_.edge_dst(gi) != cb) continue;
                    int tail = paths_.edge_src(gj);
                    if (paths_.edge_src(gi) != tail) continue;
                    const auto& zs = bsmall.by_endpoint[tail];
                    if (zs.empty()) continue;
                    double w = std::sqrt(paths_.mu(cb) / (beta * paths_.mu(tail)));
                    Eigen::MatrixXcd lft(dr, static_cast<long>(zs.size()));
                    Eigen::MatrixXcd rgt(static_cast<long>(zs.size()), dc);
                    for (size_t z = 0; z < zs.size(); ++z) {
                        int zj = app_small[zs[z]][gj];
                        int zi = app_small[zs[z]][gi];
                        lft.col(static_cast<long>(z)) = t2i.blocks[rb].col(bmid.block_pos[zj]);
                        rgt.row(static_cast<long>(z)) = t2e.blocks[cb].row(bmid.block_pos[zi]);
                    }
                    ops.push_back(w * lft * rgt);
                    sign.push_back(-1.0);
                }
            }
            if (ops.empty()) continue;

            // Choi matrix of the route difference restricted to this support
            // block is X J X^* with X the stacked vectorized Kraus operators;
            // its nonzero spectrum equals that of R J R^* after X = QR.
            int kct = static_cast<int>(ops.size());
            Eigen::MatrixXcd x(dr * dc, kct);
            for (int a = 0; a < kct; ++a)
                x.col(a) = Eigen::Map<const Eigen::VectorXcd>(ops[a].data(), dr * dc);
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
            long rk = std::min<long>(dr * dc, kct);
            Eigen::MatrixXcd r = qr.matrixQR()
                                     .topLeftCorner(rk, kct)
                                     .template triangularView<Eigen::Upper>();
            Eigen::MatrixXcd h =
                r * Eigen::Map<Eigen::VectorXd>(sign.data(), kct).asDiagonal() * r.adjoint();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            double res = es.eigenvalues().cwiseAbs().maxCoeff();
            if (res > rep.residual) {
                rep.residual = res;
                std::ostringstream os;
                os << "worst Choi block (" << k.even_vertices()[rb] << ","
                   << k.even_vertices()[cb] << ")";
                rep.detail = os.str();
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// joins and join commuting squares

StringElement StringModel::project(const std::vector<StringElement>& onb,
                                   const StringElement& x) {
    StringElement p = zero(x.point);
    p.point = x.point;
    for (const auto& b : onb) p += inner(b, x) * b;
    return p;
}

AlgebraView StringModel::join_algebras(const std::vector<LatticePoint>& pts,
                                       LatticePoint ambient, double rank_tol) {
    AlgebraView view;
    view.point = ambient;
    view.block_dims = block_dims(ambient);

    auto try_add = [&](StringElement x) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : view.basis) x -= inner(b, x) * b;
        double nrm = trace_norm(x);
        if (nrm <= rank_tol) return false;
        x *= Complex(1.0 / nrm, 0);
        view.basis.push_back(std::move(x));
        return true;
    };

    try_add(identity(ambient));
    for (const auto& pt : pts) {
        auto dims = block_dims(pt);
        for (const auto& [q, d] : dims)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    try_add(embed_to(matrix_unit(pt, q, a, b), ambient));
    }
    bool grew = true;
    while (grew) {
        grew = false;
        size_t snapshot = view.basis.size();
        for (size_t a = 0; a < snapshot; ++a)
            for (size_t b = 0; b < snapshot; ++b)
                if (try_add(multiply(view.basis[a], view.basis[b]))) grew = true;
    }
    return view;
}

AlgebraView StringModel::corner_join(int n, int s, double rank_tol) {
    if (s < 1) throw std::invalid_argument("corner_join: s >= 1");
    std::vector<LatticePoint> pts;
    for (int i = 0; i < s; ++i) {
        LatticePoint p(s, 0);
        p[i] = n;
        pts.push_back(std::move(p));
    }
    return join_algebras(pts, LatticePoint(s, n), rank_tol);
}

CheckReport StringModel::check_flat_commutation(int n, int m, int i, int j, double tol) {
    if (i == j) throw std::invalid_argument("check_flat_commutation: need i != j");
    int size = std::max(i, j) + 1;
    LatticePoint pi(size, 0), pj(size, 0), amb(size, 0);
    pi[i] = n;
    pj[j] = m;
    amb[i] = n;
    amb[j] = m;

    std::vector<StringElement> xs, ys;
    for (const auto& [q, d] : block_dims(pi))
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) xs.push_back(embed_to(matrix_unit(pi, q, a, b), amb));
    for (const auto& [q, d] : block_dims(pj))
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) ys.push_back(embed_to(matrix_unit(pj, q, a, b), amb));

    CheckReport rep;
    rep.name = "flat-commutation";
    rep.tol = tol;
    for (const auto& x : xs)
        for (const auto& y : ys) {
            double c = frobenius_norm(multiply(x, y) - multiply(y, x));
            rep.residual = std::max(rep.residual, c);
        }
    std::ostringstream os;
    os << xs.size() << "x" << ys.size() << " unit pairs";
    rep.detail = os.str();
    return rep;
}

CheckReport StringModel::check_join_square(const std::vector<LatticePoint>& top_pts_small,
                                           const std::vector<LatticePoint>& top_pts_big,
                                           const LatticePoint& small_pt,
                                           const LatticePoint& ambient, double tol,
                                           const char* name) {
    AlgebraView big = join_algebras(top_pts_big, ambient);
    AlgebraView small = join_algebras(top_pts_small, ambient);

    CheckReport rep;
    rep.name = name;
    rep.tol = tol;
    for (const auto& x : big.basis) {
        StringElement e = embed_to(expect_to(x, small_pt), ambient);
        StringElement p = project(small.basis, x);
        rep.residual = std::max(rep.residual, trace_norm(e - p));
    }
    std::ostringstream os;
    os << "join dims " << big.dimension() << " -> " << small.dimension();
    rep.detail = os.str();
    return rep;
}

CheckReport StringModel::check_multileg_square(int n, int s, double tol) {
    if (s < 1 || n < 0) throw std::invalid_argument("check_multileg_square: bad arguments");
    std::vector<LatticePoint> big, small;
    for (int i = 0; i < s; ++i) {
        LatticePoint p(s, 0), q(s, 0);
        p[i] = n + 1;
        q[i] = n;
        big.push_back(std::move(p));
        small.push_back(std::move(q));
    }
    return check_join_square(small, big, LatticePoint(s, n), LatticePoint(s, n + 1), tol,
                             "multileg-square");
}

CheckReport StringModel::check_floor_square(int n, int j, int s, double tol) {
    if (j < 1 || j > s - 1 || n < 0)
        throw std::invalid_argument("check_floor_square: need 1 <= j <= s-1, n >= 0");
    auto combo = [&](int level, int count) {
        LatticePoint p(j + 1, 0);
        for (int d = 0; d < count; ++d) p[d] = level;
        return p;
    };
    auto leg = [&](int level) {
        LatticePoint p(j + 1, 0);
        p[j] = level;
        return p;
    };
    return check_join_square({combo(n, j), leg(n)}, {combo(n + 1, j), leg(n + 1)},
                             combo(n, j + 1), combo(n + 1, j + 1), tol, "floor-square");
}

}  // namespace paragroup
