#include "paragroup/connection.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rng.hpp"
#include "square_index.hpp"

namespace paragroup {

namespace detail {

SquareIndex SquareIndex::build(const BipartiteGraph& bottom, const BipartiteGraph& left,
                               const BipartiteGraph& right, const BipartiteGraph& top) {
    SquareIndex s;
    s.n0 = static_cast<int>(bottom.even_vertices().size());
    s.n1 = static_cast<int>(bottom.odd_vertices().size());
    s.n2 = static_cast<int>(left.odd_vertices().size());
    s.n3 = static_cast<int>(right.odd_vertices().size());

    auto resolve = [](const BipartiteGraph& g, const BipartiteGraph& v0g, bool v0_even,
                      const BipartiteGraph& v1g, bool v1_even, std::vector<int>& src,
                      std::vector<int>& dst, std::vector<std::vector<int>>& from,
                      std::vector<std::vector<int>>& to, int ns, int nd) {
        from.assign(ns, {});
        to.assign(nd, {});
        for (size_t e = 0; e < g.edges().size(); ++e) {
            const auto& name_s = g.even_vertices()[g.even_of(e)];
            const auto& name_d = g.odd_vertices()[g.odd_of(e)];
            int is = v0_even ? v0g.even_index(name_s) : v0g.odd_index(name_s);
            int id = v1_even ? v1g.even_index(name_d) : v1g.odd_index(name_d);
            if (is < 0 || id < 0)
                throw std::invalid_argument("connection square: corner classes do not match");
            src.push_back(is);
            dst.push_back(id);
            from[is].push_back(static_cast<int>(e));
            to[id].push_back(static_cast<int>(e));
        }
    };
    resolve(bottom, bottom, true, bottom, false, s.b_src, s.b_dst, s.b_from, s.b_to, s.n0, s.n1);
    resolve(left, bottom, true, left, false, s.l_src, s.l_dst, s.l_from, s.l_to, s.n0, s.n2);
    resolve(right, bottom, false, right, false, s.r_src, s.r_dst, s.r_from, s.r_to, s.n1, s.n3);
    resolve(top, left, false, right, false, s.t_src, s.t_dst, s.t_from, s.t_to, s.n2, s.n3);
    return s;
}

}  // namespace detail

namespace {

constexpr double kStructuralTol = 1e-6;

std::uint64_t pack_cell(const Cell& c, std::uint64_t sl, std::uint64_t sr, std::uint64_t st) {
    return static_cast<std::uint64_t>(c.bottom) * sl * sr * st +
           static_cast<std::uint64_t>(c.left) * sr * st +
           static_cast<std::uint64_t>(c.right) * st + static_cast<std::uint64_t>(c.top);
}

std::set<std::string> name_set(const std::vector<std::string>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

ConnectionSquare::ConnectionSquare(BipartiteGraph bottom, BipartiteGraph left,
                                   BipartiteGraph right, BipartiteGraph top,
                                   std::map<std::string, double> weights,
                                   std::vector<std::pair<Cell, Complex>> cells)
    : bottom_(std::move(bottom)), left_(std::move(left)), right_(std::move(right)),
      top_(std::move(top)), mu_(std::move(weights)), cells_(std::move(cells)) {
    validate();

    stride_l_ = left_.edges().size();
    stride_r_ = right_.edges().size();
    stride_t_ = top_.edges().size();
    std::sort(cells_.begin(), cells_.end(), [&](const auto& a, const auto& b) {
        return pack_cell(a.first, stride_l_, stride_r_, stride_t_) <
               pack_cell(b.first, stride_l_, stride_r_, stride_t_);
    });
    for (size_t i = 1; i < cells_.size(); ++i)
        if (cells_[i].first == cells_[i - 1].first)
            throw std::invalid_argument("connection square: duplicate cell");

    std::uint64_t total = static_cast<std::uint64_t>(bottom_.edges().size()) * stride_l_ *
                          stride_r_ * stride_t_;
    use_dense_ = total > 0 && total <= (1u << 22);
    if (use_dense_) {
        dense_.assign(total, Complex(0, 0));
        for (const auto& [c, v] : cells_)
            dense_[pack_cell(c, stride_l_, stride_r_, stride_t_)] = v;
    }
}

void ConnectionSquare::validate() const {
    for (const BipartiteGraph* g : {&bottom_, &left_, &right_, &top_})
        if (g->edges().size() > 0xffff)
            throw std::invalid_argument("connection square: too many edges on one side");
    if (name_set(bottom_.even_vertices()) != name_set(left_.even_vertices()))
        throw std::invalid_argument("connection square: bottom/left V0 mismatch");
    if (name_set(bottom_.odd_vertices()) != name_set(right_.even_vertices()))
        throw std::invalid_argument("connection square: bottom/right V1 mismatch");
    if (name_set(left_.odd_vertices()) != name_set(top_.even_vertices()))
        throw std::invalid_argument("connection square: left/top V2 mismatch");
    if (name_set(right_.odd_vertices()) != name_set(top_.odd_vertices()))
        throw std::invalid_argument("connection square: right/top V3 mismatch");

    for (const BipartiteGraph* g : {&bottom_, &left_, &right_, &top_}) {
        for (const auto& v : g->even_vertices())
            if (mu(v) <= 0) throw std::invalid_argument("non-positive PF weight at " + v);
        for (const auto& v : g->odd_vertices())
            if (mu(v) <= 0) throw std::invalid_argument("non-positive PF weight at " + v);
    }

    // Each side graph must see the weights as its own PF eigenvector; the
    // eigenvalue pairings (bottom/top, left/right) are consequences of
    // unitarity and surface through check_biunitarity, not here.
    auto fit_beta = [&](const BipartiteGraph& g) {
        Eigen::MatrixXd a = g.adjacency();
        Eigen::VectorXd x(a.rows()), y(a.cols());
        for (long i = 0; i < a.rows(); ++i) x(i) = mu(g.even_vertices()[i]);
        for (long j = 0; j < a.cols(); ++j) y(j) = mu(g.odd_vertices()[j]);
        double beta = x.dot(a * y) / x.dot(x);
        double res = std::max((a * y - beta * x).cwiseAbs().maxCoeff(),
                              (a.transpose() * x - beta * y).cwiseAbs().maxCoeff());
        if (res > kStructuralTol * std::max(1.0, beta))
            throw std::invalid_argument("weights are not Perron-Frobenius for a side graph");
        return beta;
    };
    const_cast<ConnectionSquare*>(this)->beta_bottom_ = fit_beta(bottom_);
    const_cast<ConnectionSquare*>(this)->beta_left_ = fit_beta(left_);
    fit_beta(top_);
    fit_beta(right_);

    auto idx = detail::SquareIndex::build(bottom_, left_, right_, top_);
    for (const auto& [c, v] : cells_) {
        (void)v;
        if (c.bottom < 0 || c.bottom >= static_cast<int>(bottom_.edges().size()) ||
            c.left < 0 || c.left >= static_cast<int>(left_.edges().size()) || c.right < 0 ||
            c.right >= static_cast<int>(right_.edges().size()) || c.top < 0 ||
            c.top >= static_cast<int>(top_.edges().size()))
            throw std::invalid_argument("cell edge index out of range");
        bool ok = idx.b_src[c.bottom] == idx.l_src[c.left] &&
                  idx.b_dst[c.bottom] == idx.r_src[c.right] &&
                  idx.l_dst[c.left] == idx.t_src[c.top] &&
                  idx.r_dst[c.right] == idx.t_dst[c.top];
        if (!ok) throw std::invalid_argument("cell is not corner-compatible");
    }
}

double ConnectionSquare::mu(const std::string& v) const {
    auto it = mu_.find(v);
    if (it == mu_.end()) throw std::invalid_argument("missing PF weight for vertex " + v);
    return it->second;
}

Complex ConnectionSquare::cell(int b, int l, int r, int t) const {
    Cell c{b, l, r, t};
    std::uint64_t key = pack_cell(c, stride_l_, stride_r_, stride_t_);
    if (use_dense_) return dense_[key];
    auto it = std::lower_bound(cells_.begin(), cells_.end(), key, [&](const auto& p, std::uint64_t k) {
        return pack_cell(p.first, stride_l_, stride_r_, stride_t_) < k;
    });
    if (it != cells_.end() && it->first == c) return it->second;
    return Complex(0, 0);
}

std::array<std::string, 4> ConnectionSquare::corners(const Cell& c) const {
    return {bottom_.even_vertices()[bottom_.even_of(c.bottom)],
            bottom_.odd_vertices()[bottom_.odd_of(c.bottom)],
            left_.odd_vertices()[left_.odd_of(c.left)],
            right_.odd_vertices()[right_.odd_of(c.right)]};
}

bool ConnectionSquare::all_sides_equal() const {
    return bottom_ == left_ && bottom_ == right_ && bottom_ == top_;
}

bool ConnectionSquare::self_composable() const {
    return all_sides_equal() &&
           name_set(bottom_.even_vertices()) == name_set(bottom_.odd_vertices());
}

// ---------------------------------------------------------------------------
// biunitarity

namespace {

/// Max-norm deviation of M M^* and M^* M from the identity.
double gram_residual(const Eigen::MatrixXcd& m) {
    double r1 = 0, r2 = 0;
    if (m.rows() > 0)
        r1 = (m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.rows()))
                 .cwiseAbs()
                 .maxCoeff();
    if (m.cols() > 0)
        r2 = (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.cols(), m.cols()))
                 .cwiseAbs()
                 .maxCoeff();
    return std::max(r1, r2);
}

struct FamilyResult {
    double residual = 0.0;
    bool structural_ok = true;
    std::string worst;
};

template <typename CellFn>
FamilyResult plain_family_residual(const detail::SquareIndex& s, CellFn cell) {
    FamilyResult out;
    for (int x = 0; x < s.n0; ++x) {
        for (int w = 0; w < s.n3; ++w) {
            std::vector<std::pair<int, int>> rows, cols;
            for (int l : s.l_from[x])
                for (int t : s.t_from[s.l_dst[l]])
                    if (s.t_dst[t] == w) rows.push_back({l, t});
            for (int b : s.b_from[x])
                for (int r : s.r_from[s.b_dst[b]])
                    if (s.r_dst[r] == w) cols.push_back({b, r});
            if (rows.empty() && cols.empty()) continue;
            if (rows.size() != cols.size()) out.structural_ok = false;
            Eigen::MatrixXcd m(rows.size(), cols.size());
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < cols.size(); ++j)
                    m(i, j) = cell(cols[j].first, rows[i].first, cols[j].second, rows[i].second);
            double res = gram_residual(m);
            if (res > out.residual) {
                out.residual = res;
                out.worst = "plain corner pair (" + std::to_string(x) + "," + std::to_string(w) + ")";
            }
        }
    }
    return out;
}

template <typename CellFn, typename WeightFn>
FamilyResult renorm_family_residual(const detail::SquareIndex& s, CellFn cell, WeightFn kappa) {
    FamilyResult out;
    for (int y = 0; y < s.n1; ++y) {
        for (int z = 0; z < s.n2; ++z) {
            std::vector<std::pair<int, int>> rows, cols;
            for (int b : s.b_to[y])
                for (int l : s.l_from[s.b_src[b]])
                    if (s.l_dst[l] == z) rows.push_back({b, l});
            for (int r : s.r_from[y])
                for (int t : s.t_from[z])
                    if (s.t_dst[t] == s.r_dst[r]) cols.push_back({r, t});
            if (rows.empty() && cols.empty()) continue;
            if (rows.size() != cols.size()) out.structural_ok = false;
            Eigen::MatrixXcd m(rows.size(), cols.size());
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < cols.size(); ++j) {
                    int b = rows[i].first, l = rows[i].second;
                    int r = cols[j].first, t = cols[j].second;
                    m(i, j) = cell(b, l, r, t) * kappa(s.b_src[b], y, z, s.r_dst[r]);
                }
            double res = gram_residual(m);
            if (res > out.residual) {
                out.residual = res;
                out.worst =
                    "renormalized corner pair (" + std::to_string(y) + "," + std::to_string(z) + ")";
            }
        }
    }
    return out;
}

}  // namespace

CheckReport check_biunitarity(const ConnectionSquare& w, double tol) {
    auto s = detail::SquareIndex::build(w.bottom(), w.left(), w.right(), w.top());
    auto cell = [&](int b, int l, int r, int t) { return w.cell(b, l, r, t); };

    std::vector<double> mu0(s.n0), mu1(s.n1), mu2(s.n2), mu3(s.n3);
    for (int i = 0; i < s.n0; ++i) mu0[i] = w.mu(w.v0()[i]);
    for (int i = 0; i < s.n1; ++i) mu1[i] = w.mu(w.v1()[i]);
    for (int i = 0; i < s.n2; ++i) mu2[i] = w.mu(w.v2()[i]);
    for (int i = 0; i < s.n3; ++i) mu3[i] = w.mu(w.v3()[i]);
    auto kappa = [&](int a, int y, int z, int d) {
        return std::sqrt(mu0[a] * mu3[d] / (mu1[y] * mu2[z]));
    };

    FamilyResult plain = plain_family_residual(s, cell);
    FamilyResult ren = renorm_family_residual(s, cell, kappa);

    CheckReport rep;
    rep.name = "biunitarity";
    rep.residual = std::max(plain.residual, ren.residual);
    rep.tol = tol;
    rep.structural_ok = plain.structural_ok && ren.structural_ok;
    std::ostringstream os;
    os << "plain=" << plain.residual << " renormalized=" << ren.residual;
    if (!rep.structural_ok) os << " (corner-pair matrix not square)";
    if (!plain.worst.empty() || !ren.worst.empty())
        os << " worst: " << (plain.residual >= ren.residual ? plain.worst : ren.worst);
    rep.detail = os.str();
    return rep;
}

// ---------------------------------------------------------------------------
// renormalization

namespace {

/// sqrt(mu(bl) mu(tr) / (mu(br) mu(tl))), evaluated on the lexicographically
/// smaller of the cell's corner quadruple and its reflection so that the two
/// reflection factors are exact floating-point inverses.
double renorm_factor(const std::map<std::string, double>& mu,
                     const std::array<std::string, 4>& orig,
                     const std::array<std::string, 4>& refl) {
    const auto& q = std::min(orig, refl);
    double base = std::sqrt(mu.at(q[0]) * mu.at(q[3]) / (mu.at(q[1]) * mu.at(q[2])));
    return orig <= refl ? base : 1.0 / base;
}

}  // namespace

ConnectionSquare renormalize(const ConnectionSquare& w, RenormMode mode) {
    std::vector<std::pair<Cell, Complex>> cells;
    cells.reserve(w.cells().size());
    for (const auto& [c, v] : w.cells()) {
        auto co = w.corners(c);  // {A, B, C, D} = {bl, br, tl, tr}
        switch (mode) {
            case RenormMode::horizontal: {
                double f = renorm_factor(w.weights(), co, {co[1], co[0], co[3], co[2]});
                cells.push_back({Cell{c.bottom, c.right, c.left, c.top}, f * std::conj(v)});
                break;
            }
            case RenormMode::vertical: {
                double f = renorm_factor(w.weights(), co, {co[2], co[3], co[0], co[1]});
                cells.push_back({Cell{c.top, c.left, c.right, c.bottom}, f * std::conj(v)});
                break;
            }
            case RenormMode::both:
                cells.push_back({Cell{c.top, c.right, c.left, c.bottom}, v});
                break;
        }
    }
    switch (mode) {
        case RenormMode::horizontal:
            return ConnectionSquare(transpose(w.bottom()), w.right(), w.left(),
                                    transpose(w.top()), w.weights(), std::move(cells));
        case RenormMode::vertical:
            return ConnectionSquare(w.top(), transpose(w.left()), transpose(w.right()),
                                    w.bottom(), w.weights(), std::move(cells));
        case RenormMode::both:
        default:
            return ConnectionSquare(transpose(w.top()), transpose(w.right()),
                                    transpose(w.left()), transpose(w.bottom()), w.weights(),
                                    std::move(cells));
    }
}

// ---------------------------------------------------------------------------
// builders

ConnectionSquare build_dynkin_connection(int n) {
    if (n < 2 || n > 26) throw std::invalid_argument("build_dynkin_connection: need 2 <= n <= 26");
    std::vector<std::string> names(n);
    for (int i = 0; i < n; ++i) names[i] = std::string(1, static_cast<char>('a' + i));
    std::vector<std::string> evens, odds;
    for (int i = 0; i < n; ++i) (i % 2 == 0 ? evens : odds).push_back(names[i]);
    std::vector<GraphEdge> edges;
    for (int i = 0; i + 1 < n; ++i) {
        const std::string& ev = (i % 2 == 0) ? names[i] : names[i + 1];
        const std::string& od = (i % 2 == 0) ? names[i + 1] : names[i];
        edges.push_back({ev + od, ev, od});
    }
    BipartiteGraph g(evens, odds, edges, names[0]);

    const double theta = std::numbers::pi / (n + 1);
    std::map<std::string, double> mu;
    for (int i = 0; i < n; ++i) mu[names[i]] = std::sin((i + 1) * theta) / std::sin(theta);
    double phi = std::numbers::pi * n / (2.0 * (n + 1));
    Complex a = std::polar(1.0, phi);
    Complex ainv = std::polar(1.0, -phi);

    BipartiteGraph gt = transpose(g);
    std::vector<std::pair<Cell, Complex>> cells;
    for (size_t b = 0; b < g.edges().size(); ++b) {
        const std::string& x = g.edges()[b].even;
        const std::string& y = g.edges()[b].odd;
        for (int l : g.edges_at_even(g.even_index(x))) {
            const std::string& z = g.edges()[l].odd;
            for (int r : gt.edges_at_even(gt.even_index(y))) {
                const std::string& wv = gt.edges()[r].odd;
                for (int t : gt.edges_at_even(gt.even_index(z))) {
                    if (gt.edges()[t].odd != wv) continue;
                    Complex val(0, 0);
                    if (y == z) val += a;
                    if (x == wv) val += ainv * std::sqrt(mu[y] * mu[z]) / mu[x];
                    cells.push_back({Cell{static_cast<int>(b), l, r, t}, val});
                }
            }
        }
    }
    ConnectionSquare w(g, g, gt, gt, mu, std::move(cells));
    CheckReport rep = check_biunitarity(w, 1e-10);
    if (!rep.pass())
        throw std::runtime_error("build_dynkin_connection: biunitarity failed: " + rep.detail);
    w.verified_tol = 1e-10;
    return w;
}

int GroupData::identity() const {
    for (int e = 0; e < order(); ++e) {
        bool ok = true;
        for (int x = 0; x < order() && ok; ++x)
            ok = table[e][x] == x && table[x][e] == x;
        if (ok) return e;
    }
    throw std::invalid_argument("group table has no identity");
}

void validate_group(const GroupData& g, double tol) {
    int n = g.order();
    if (n == 0) throw std::invalid_argument("empty group");
    if (g.table.size() != static_cast<size_t>(n))
        throw std::invalid_argument("group table has wrong size");
    for (const auto& row : g.table) {
        if (row.size() != static_cast<size_t>(n))
            throw std::invalid_argument("group table has wrong row size");
        for (int v : row)
            if (v < 0 || v >= n) throw std::invalid_argument("group table entry out of range");
    }
    // each row and column a bijection
    for (int i = 0; i < n; ++i) {
        std::set<int> row(g.table[i].begin(), g.table[i].end());
        std::set<int> col;
        for (int j = 0; j < n; ++j) col.insert(g.table[j][i]);
        if (static_cast<int>(row.size()) != n || static_cast<int>(col.size()) != n)
            throw std::invalid_argument("group table rows/columns are not bijections");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (g.table[g.table[i][j]][k] != g.table[i][g.table[j][k]])
                    throw std::invalid_argument("group table is not associative");
    (void)g.identity();

    int dim_sq = 0;
    for (const auto& rep : g.irreps) {
        dim_sq += rep.dim * rep.dim;
        if (rep.matrices.size() != static_cast<size_t>(n))
            throw std::invalid_argument("irrep has wrong number of matrices");
        for (const auto& m : rep.matrices) {
            if (m.rows() != rep.dim || m.cols() != rep.dim)
                throw std::invalid_argument("irrep matrix has wrong size");
            double u = (m.adjoint() * m - Eigen::MatrixXcd::Identity(rep.dim, rep.dim))
                           .cwiseAbs()
                           .maxCoeff();
            if (u > tol) throw std::invalid_argument("irrep matrix is not unitary");
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double h = (rep.matrices[i] * rep.matrices[j] - rep.matrices[g.table[i][j]])
                               .cwiseAbs()
                               .maxCoeff();
                if (h > tol) throw std::invalid_argument("irrep is not a homomorphism");
            }
    }
    if (dim_sq != n)
        throw std::invalid_argument("irrep dimensions do not satisfy sum dim^2 = |G|");
}

GroupData cyclic_group(int n) {
    if (n < 1) throw std::invalid_argument("cyclic_group: n >= 1");
    GroupData g;
    g.name = "Z" + std::to_string(n);
    for (int i = 0; i < n; ++i) g.elements.push_back("g" + std::to_string(i));
    g.table.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.table[i][j] = (i + j) % n;
    for (int k = 0; k < n; ++k) {
        Irrep rep;
        rep.dim = 1;
        for (int j = 0; j < n; ++j) {
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
            rep.matrices.push_back(m);
        }
        g.irreps.push_back(std::move(rep));
    }
    return g;
}

GroupData symmetric_group_3() {
    using Perm = std::array<int, 3>;
    std::vector<Perm> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                               {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    std::vector<std::string> names = {"e", "r", "rr", "s", "sr", "srr"};
    auto compose = [](const Perm& a, const Perm& b) {  // (a o b)(x) = a(b(x))
        return Perm{a[b[0]], a[b[1]], a[b[2]]};
    };
    auto find = [&](const Perm& p) {
        for (size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == p) return static_cast<int>(i);
        throw std::logic_error("permutation not found");
    };
    auto sign = [](const Perm& p) {
        int inv = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[i] > p[j]) ++inv;
        return inv % 2 == 0 ? 1.0 : -1.0;
    };

    GroupData g;
    g.name = "S3";
    g.elements = names;
    g.table.assign(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) g.table[i][j] = find(compose(perms[i], perms[j]));

    Irrep triv{1, {}}, sgn{1, {}}, std2{2, {}};
    // 2-dim piece: permutation action on R^3 restricted to the plane x+y+z=0
    Eigen::MatrixXd basis(3, 2);
    basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), -1.0 / std::sqrt(2.0),
        1.0 / std::sqrt(6.0), 0.0, -2.0 / std::sqrt(6.0);
    for (const Perm& p : perms) {
        Eigen::MatrixXcd one(1, 1), sg(1, 1);
        one(0, 0) = 1.0;
        sg(0, 0) = sign(p);
        triv.matrices.push_back(one);
        sgn.matrices.push_back(sg);
        Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(3, 3);
        for (int j = 0; j < 3; ++j) pm(p[j], j) = 1.0;
        std2.matrices.push_back((basis.transpose() * pm * basis).cast<Complex>());
    }
    g.irreps = {triv, sgn, std2};
    validate_group(g);
    return g;
}

ConnectionSquare build_group_connection(const GroupData& gd) {
    validate_group(gd);
    int n = gd.order();
    const std::string mid = "m";
    for (const auto& e : gd.elements)
        if (e == mid || e.rfind("pi", 0) == 0)
            throw std::invalid_argument("group element names 'm' and 'pi*' are reserved");

    std::vector<GraphEdge> star_edges;
    for (const auto& e : gd.elements) star_edges.push_back({e, e, mid});
    BipartiteGraph star(gd.elements, {mid}, star_edges, gd.elements[gd.identity()]);

    std::vector<std::string> pis;
    std::vector<GraphEdge> rep_edges;
    for (size_t k = 0; k < gd.irreps.size(); ++k) {
        std::string pname = "pi" + std::to_string(k);
        pis.push_back(pname);
        for (int i = 0; i < gd.irreps[k].dim; ++i)
            rep_edges.push_back({pname + ":" + std::to_string(i), mid, pname});
    }
    BipartiteGraph repstar({mid}, pis, rep_edges);

    std::map<std::string, double> mu;
    for (const auto& e : gd.elements) mu[e] = 1.0;
    mu[mid] = std::sqrt(static_cast<double>(n));
    for (size_t k = 0; k < gd.irreps.size(); ++k) mu[pis[k]] = gd.irreps[k].dim;

    std::vector<std::pair<Cell, Complex>> cells;
    for (int gidx = 0; gidx < n; ++gidx) {
        int ge = star.edge_index(gd.elements[gidx]);
        for (size_t k = 0; k < gd.irreps.size(); ++k) {
            const Irrep& rep = gd.irreps[k];
            for (int i = 0; i < rep.dim; ++i) {
                int re = repstar.edge_index(pis[k] + ":" + std::to_string(i));
                for (int j = 0; j < rep.dim; ++j) {
                    int te = repstar.edge_index(pis[k] + ":" + std::to_string(j));
                    cells.push_back({Cell{ge, ge, re, te}, rep.matrices[gidx](j, i)});
                }
            }
        }
    }
    ConnectionSquare w(star, star, repstar, repstar, mu, std::move(cells));
    CheckReport rep = check_biunitarity(w, 1e-10);
    if (!rep.pass())
        throw std::runtime_error("build_group_connection: biunitarity failed: " + rep.detail);
    w.verified_tol = 1e-10;
    return w;
}

// ---------------------------------------------------------------------------
// gauge transform

namespace {

struct EdgeFamilies {
    // id-sorted edge indices per (even, odd) endpoint pair
    std::map<std::pair<std::string, std::string>, std::vector<int>> fam;
    std::vector<int> family_pos;  // position of each edge inside its family

    explicit EdgeFamilies(const BipartiteGraph& g) : family_pos(g.edges().size()) {
        for (size_t e = 0; e < g.edges().size(); ++e)
            fam[{g.edges()[e].even, g.edges()[e].odd}].push_back(static_cast<int>(e));
        for (auto& [k, v] : fam)
            for (size_t p = 0; p < v.size(); ++p) family_pos[v[p]] = static_cast<int>(p);
    }
};

template <int Slot>
std::vector<std::pair<Cell, Complex>> apply_side_gauge(
    std::vector<std::pair<Cell, Complex>> cells, const BipartiteGraph& g,
    const GaugeSet::Family& gauges, bool conjugate) {
    if (gauges.empty()) return cells;
    EdgeFamilies fams(g);
    for (const auto& [key, u] : gauges) {
        auto it = fams.fam.find(key);
        if (it == fams.fam.end())
            throw std::invalid_argument("gauge family (" + key.first + "," + key.second +
                                        ") does not exist");
        if (u.rows() != u.cols() || u.rows() != static_cast<long>(it->second.size()))
            throw std::invalid_argument("gauge matrix size mismatch for family (" + key.first +
                                        "," + key.second + ")");
    }
    auto slot_of = [](const Cell& c) -> int {
        if constexpr (Slot == 0) return c.bottom;
        if constexpr (Slot == 1) return c.left;
        if constexpr (Slot == 2) return c.right;
        return c.top;
    };
    auto with_slot = [](Cell c, int e) {
        if constexpr (Slot == 0) c.bottom = e;
        else if constexpr (Slot == 1) c.left = e;
        else if constexpr (Slot == 2) c.right = e;
        else c.top = e;
        return c;
    };
    std::map<std::array<int, 4>, Complex> acc;
    for (const auto& [c, v] : cells) {
        int e = slot_of(c);
        auto key = std::make_pair(g.edges()[e].even, g.edges()[e].odd);
        auto git = gauges.find(key);
        if (git == gauges.end()) {
            auto k = with_slot(c, e);
            acc[{k.bottom, k.left, k.right, k.top}] += v;
            continue;
        }
        const auto& members = fams.fam.at(key);
        int pos = fams.family_pos[e];
        for (size_t p = 0; p < members.size(); ++p) {
            Complex coeff = git->second(static_cast<long>(p), pos);
            if (conjugate) coeff = std::conj(coeff);
            if (coeff == Complex(0, 0)) continue;
            auto k = with_slot(c, members[p]);
            acc[{k.bottom, k.left, k.right, k.top}] += coeff * v;
        }
    }
    std::vector<std::pair<Cell, Complex>> out;
    out.reserve(acc.size());
    for (const auto& [k, v] : acc)
        if (std::abs(v) > 0) out.push_back({Cell{k[0], k[1], k[2], k[3]}, v});
    return out;
}

}  // namespace

ConnectionSquare gauge_transform(const ConnectionSquare& w, const GaugeSet& gauges) {
    // W' = (u_left ox u_top) W (u_bottom ox u_right)^*
    auto cells = w.cells();
    cells = apply_side_gauge<0>(std::move(cells), w.bottom(), gauges.bottom, true);
    cells = apply_side_gauge<1>(std::move(cells), w.left(), gauges.left, false);
    cells = apply_side_gauge<2>(std::move(cells), w.right(), gauges.right, true);
    cells = apply_side_gauge<3>(std::move(cells), w.top(), gauges.top, false);
    return ConnectionSquare(w.bottom(), w.left(), w.right(), w.top(), w.weights(),
                            std::move(cells));
}

// ---------------------------------------------------------------------------
// generalized Yang-Baxter equation

// Hexagon boundary: vertices a1..a6 with edges x1: a1->a2, x2: a2->a3,
// x3: a3->a4, x4: a5->a4, x5: a6->a5, x6: a1->a6 (a1 the source, a4 the
// sink). Each side sums over an internal vertex a7 and its three edges, the
// hexagon cut into three cells either as
//   left + top-right + bottom-right   (x7: a2->a7, x8: a7->a4, x9: a6->a7)
// or as
//   top-left + bottom-left + right    (x7: a1->a7, x8: a7->a3, x9: a7->a5).
// Expanding the two transports along the reduced words (1,0,1) and (0,1,0)
// of the order-reversal of three letters gives exactly these two sums, so
// this equality is entrywise equality of the two transport routes.
CheckReport check_gybe(const ConnectionSquare& y, double tol) {
    if (!y.self_composable())
        throw std::invalid_argument("check_gybe: connection is not self-composable");
    const BipartiteGraph& k = y.bottom();
    int nv = static_cast<int>(k.even_vertices().size());

    // dst(e) as an even-class index, so edges chain
    std::vector<int> dst(k.edges().size());
    for (size_t e = 0; e < k.edges().size(); ++e)
        dst[e] = k.even_index(k.odd_vertices()[k.odd_of(e)]);

    CheckReport rep;
    rep.name = "gybe";
    rep.tol = tol;

    for (int a1 = 0; a1 < nv; ++a1) {
        for (int x1 : k.edges_at_even(a1)) {
            int a2 = dst[x1];
            for (int x6 : k.edges_at_even(a1)) {
                int a6 = dst[x6];
                for (int x2 : k.edges_at_even(a2)) {
                    int a3 = dst[x2];
                    for (int x5 : k.edges_at_even(a6)) {
                        int a5 = dst[x5];
                        for (int x3 : k.edges_at_even(a3)) {
                            int a4 = dst[x3];
                            for (int x4 : k.edges_at_even(a5)) {
                                if (dst[x4] != a4) continue;
                                Complex lhs(0, 0), rhs(0, 0);
                                for (int x7 : k.edges_at_even(a2)) {
                                    int a7 = dst[x7];
                                    for (int x8 : k.edges_at_even(a7)) {
                                        if (dst[x8] != a4) continue;
                                        for (int x9 : k.edges_at_even(a6)) {
                                            if (dst[x9] != a7) continue;
                                            lhs += y.cell(x6, x1, x9, x7) *
                                                   y.cell(x7, x2, x8, x3) *
                                                   y.cell(x5, x9, x4, x8);
                                        }
                                    }
                                }
                                for (int x7 : k.edges_at_even(a1)) {
                                    int a7 = dst[x7];
                                    for (int x8 : k.edges_at_even(a7)) {
                                        if (dst[x8] != a3) continue;
                                        for (int x9 : k.edges_at_even(a7)) {
                                            if (dst[x9] != a5) continue;
                                            rhs += y.cell(x7, x1, x8, x2) *
                                                   y.cell(x6, x7, x5, x9) *
                                                   y.cell(x9, x8, x4, x3);
                                        }
                                    }
                                }
                                double d = std::abs(lhs - rhs);
                                if (d > rep.residual) {
                                    rep.residual = d;
                                    rep.detail = "boundary edges (" + k.edges()[x1].id + "," +
                                                 k.edges()[x2].id + "," + k.edges()[x3].id +
                                                 "," + k.edges()[x4].id + "," +
                                                 k.edges()[x5].id + "," + k.edges()[x6].id +
                                                 ")";
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// random biunitary connections

namespace {

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

ConnectionSquare build_random_biunitary(const BipartiteGraph& k, const PFData& pf,
                                        std::uint64_t seed, int max_iter) {
    if (name_set(k.even_vertices()) != name_set(k.odd_vertices()))
        throw std::invalid_argument("build_random_biunitary: graph is not self-composable");
    auto s = detail::SquareIndex::build(k, k, k, k);

    // structural cells
    std::vector<Cell> keys;
    for (size_t b = 0; b < k.edges().size(); ++b)
        for (int l : s.l_from[s.b_src[b]])
            for (int r : s.r_from[s.b_dst[b]])
                for (int t : s.t_from[s.l_dst[l]])
                    if (s.t_dst[t] == s.r_dst[r])
                        keys.push_back(Cell{static_cast<int>(b), l, r, t});

    std::map<std::array<int, 4>, int> pos;
    for (size_t i = 0; i < keys.size(); ++i)
        pos[{keys[i].bottom, keys[i].left, keys[i].right, keys[i].top}] = static_cast<int>(i);
    std::vector<Complex> vals(keys.size());
    detail::SplitMix rng(seed);
    for (auto& v : vals) v = Complex(rng.normal(), rng.normal());

    std::vector<double> mu0(s.n0), mu1(s.n1), mu2(s.n2), mu3(s.n3);
    for (int i = 0; i < s.n0; ++i) mu0[i] = pf.weight(k.even_vertices()[i]);
    for (int i = 0; i < s.n1; ++i) mu1[i] = pf.weight(k.odd_vertices()[i]);
    for (int i = 0; i < s.n2; ++i) mu2[i] = pf.weight(k.odd_vertices()[i]);
    for (int i = 0; i < s.n3; ++i) mu3[i] = pf.weight(k.odd_vertices()[i]);

    auto at = [&](int b, int l, int r, int t) -> Complex& {
        return vals[pos.at({b, l, r, t})];
    };
    auto kappa = [&](int a, int yy, int z, int d) {
        return std::sqrt(mu0[a] * mu3[d] / (mu1[yy] * mu2[z]));
    };

    // block index lists, built once
    struct Block {
        std::vector<std::pair<int, int>> rows, cols;
    };
    std::vector<Block> plain, renorm;
    for (int x = 0; x < s.n0; ++x)
        for (int w = 0; w < s.n3; ++w) {
            Block blk;
            for (int l : s.l_from[x])
                for (int t : s.t_from[s.l_dst[l]])
                    if (s.t_dst[t] == w) blk.rows.push_back({l, t});
            for (int b : s.b_from[x])
                for (int r : s.r_from[s.b_dst[b]])
                    if (s.r_dst[r] == w) blk.cols.push_back({b, r});
            if (blk.rows.empty() && blk.cols.empty()) continue;
            if (blk.rows.size() != blk.cols.size())
                throw std::invalid_argument("biunitarity structurally impossible on this graph");
            plain.push_back(std::move(blk));
        }
    for (int yy = 0; yy < s.n1; ++yy)
        for (int z = 0; z < s.n2; ++z) {
            Block blk;
            for (int b : s.b_to[yy])
                for (int l : s.l_from[s.b_src[b]])
                    if (s.l_dst[l] == z) blk.rows.push_back({b, l});
            for (int r : s.r_from[yy])
                for (int t : s.t_from[z])
                    if (s.t_dst[t] == s.r_dst[r]) blk.cols.push_back({r, t});
            if (blk.rows.empty() && blk.cols.empty()) continue;
            if (blk.rows.size() != blk.cols.size())
                throw std::invalid_argument("biunitarity structurally impossible on this graph");
            renorm.push_back(std::move(blk));
        }

    auto residual = [&]() {
        double res = 0;
        for (const Block& blk : plain) {
            Eigen::MatrixXcd m(blk.rows.size(), blk.cols.size());
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j)
                    m(i, j) = at(blk.cols[j].first, blk.rows[i].first, blk.cols[j].second,
                                 blk.rows[i].second);
            res = std::max(res, gram_residual(m));
        }
        for (const Block& blk : renorm) {
            Eigen::MatrixXcd m(blk.rows.size(), blk.cols.size());
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j) {
                    int b = blk.rows[i].first, l = blk.rows[i].second;
                    int r = blk.cols[j].first, t = blk.cols[j].second;
                    m(i, j) = at(b, l, r, t) * kappa(s.b_src[b], s.b_dst[b], s.l_dst[l], s.r_dst[r]);
                }
            res = std::max(res, gram_residual(m));
        }
        return res;
    };

    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        for (const Block& blk : plain) {
            Eigen::MatrixXcd m(blk.rows.size(), blk.cols.size());
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j)
                    m(i, j) = at(blk.cols[j].first, blk.rows[i].first, blk.cols[j].second,
                                 blk.rows[i].second);
            m = polar_unitary(m);
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j)
                    at(blk.cols[j].first, blk.rows[i].first, blk.cols[j].second,
                       blk.rows[i].second) = m(i, j);
        }
        for (const Block& blk : renorm) {
            Eigen::MatrixXcd m(blk.rows.size(), blk.cols.size());
            std::vector<std::vector<double>> kap(blk.rows.size(),
                                                 std::vector<double>(blk.cols.size()));
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j) {
                    int b = blk.rows[i].first, l = blk.rows[i].second;
                    int r = blk.cols[j].first, t = blk.cols[j].second;
                    kap[i][j] = kappa(s.b_src[b], s.b_dst[b], s.l_dst[l], s.r_dst[r]);
                    m(i, j) = at(b, l, r, t) * kap[i][j];
                }
            m = polar_unitary(m);
            for (size_t i = 0; i < blk.rows.size(); ++i)
                for (size_t j = 0; j < blk.cols.size(); ++j)
                    at(blk.rows[i].first, blk.rows[i].second, blk.cols[j].first,
                       blk.cols[j].second) = m(i, j) / kap[i][j];
        }
        if (it % 8 == 7 && residual() < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged && residual() >= 1e-13)
        throw std::runtime_error("build_random_biunitary: projection did not converge");

    std::map<std::string, double> mu = pf.weights;
    std::vector<std::pair<Cell, Complex>> cells;
    for (size_t i = 0; i < keys.size(); ++i) cells.push_back({keys[i], vals[i]});
    return ConnectionSquare(k, k, k, k, std::move(mu), std::move(cells));
}

}  // namespace paragroup
