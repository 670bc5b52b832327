#include "paragroup/state_sum.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace paragroup {

int PathBasis::find(const std::vector<std::uint16_t>& p) const {
    auto it = std::lower_bound(paths.begin(), paths.end(), p);
    if (it == paths.end() || *it != p) return -1;
    return static_cast<int>(it - paths.begin());
}

double TransportMatrix::unitarity_residual() const {
    double r = 0;
    for (const auto& b : blocks) {
        if (b.rows() == 0) continue;
        r = std::max(r, (b.adjoint() * b - Eigen::MatrixXcd::Identity(b.cols(), b.cols()))
                            .cwiseAbs()
                            .maxCoeff());
        r = std::max(r, (b * b.adjoint() - Eigen::MatrixXcd::Identity(b.rows(), b.rows()))
                            .cwiseAbs()
                            .maxCoeff());
    }
    return r;
}

double TransportMatrix::max_abs_diff(const TransportMatrix& other) const {
    if (blocks.size() != other.blocks.size())
        throw std::invalid_argument("transport matrices have different block structure");
    double r = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].rows() == 0 && other.blocks[i].rows() == 0) continue;
        if (blocks[i].rows() != other.blocks[i].rows() ||
            blocks[i].cols() != other.blocks[i].cols())
            throw std::invalid_argument("transport matrices have different block sizes");
        if (blocks[i].size() > 0)
            r = std::max(r, (blocks[i] - other.blocks[i]).cwiseAbs().maxCoeff());
    }
    return r;
}

std::pair<double, double> TransportMatrix::singular_value_range() const {
    double lo = 1.0, hi = 1.0;
    bool any = false;
    for (const auto& b : blocks) {
        if (b.rows() == 0) continue;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0) continue;
        if (!any) {
            lo = sv(sv.size() - 1);
            hi = sv(0);
            any = true;
        } else {
            lo = std::min(lo, sv(sv.size() - 1));
            hi = std::max(hi, sv(0));
        }
    }
    return {lo, hi};
}

CheckReport GramReport::report(double tol) const {
    CheckReport rep;
    rep.name = "gram";
    rep.tol = tol;
    rep.residual = std::max(std::abs(min_singular - 1.0), std::abs(max_singular - 1.0));
    std::ostringstream os;
    os << "dim=" << dimension << " min_sv=" << min_singular << " max_sv=" << max_singular;
    rep.detail = os.str();
    return rep;
}

PathModel::PathModel(ConnectionSquare y, int cap) : y_(std::move(y)), cap_(cap) {
    if (!y_.self_composable())
        throw std::invalid_argument("PathModel: connection is not self-composable");
    const BipartiteGraph& k = y_.bottom();
    nv_ = static_cast<int>(k.even_vertices().size());
    if (k.edges().size() > 0xffff) throw std::invalid_argument("PathModel: too many edges");
    src_.resize(k.edges().size());
    dst_.resize(k.edges().size());
    for (size_t e = 0; e < k.edges().size(); ++e) {
        src_[e] = k.even_of(static_cast<int>(e));
        dst_[e] = k.even_index(k.odd_vertices()[k.odd_of(static_cast<int>(e))]);
    }
    mu_.resize(nv_);
    for (int v = 0; v < nv_; ++v) mu_[v] = y_.mu(k.even_vertices()[v]);
    start_ = k.base_vertex() ? k.even_index(*k.base_vertex()) : 0;
}

const PathBasis& PathModel::basis(int length) {
    auto it = bases_.find(length);
    if (it != bases_.end()) return it->second;
    if (length < 0) throw std::invalid_argument("negative path length");

    PathBasis b;
    b.length = length;
    if (length == 0) {
        b.paths.push_back({});
        b.endpoint.push_back(start_);
    } else {
        const PathBasis& prev = basis(length - 1);
        const BipartiteGraph& k = y_.bottom();
        for (int p = 0; p < prev.size(); ++p) {
            for (int e : k.edges_at_even(prev.endpoint[p])) {
                if (static_cast<int>(b.paths.size()) >= cap_)
                    throw std::runtime_error("path basis at length " + std::to_string(length) +
                                             " exceeds cap " + std::to_string(cap_));
                auto path = prev.paths[p];
                path.push_back(static_cast<std::uint16_t>(e));
                b.paths.push_back(std::move(path));
                b.endpoint.push_back(dst_[e]);
            }
        }
    }
    b.by_endpoint.assign(nv_, {});
    b.block_pos.resize(b.paths.size());
    for (int p = 0; p < b.size(); ++p) {
        b.block_pos[p] = static_cast<int>(b.by_endpoint[b.endpoint[p]].size());
        b.by_endpoint[b.endpoint[p]].push_back(p);
    }
    return bases_.emplace(length, std::move(b)).first->second;
}

const std::vector<std::vector<int>>& PathModel::append_index(int length) {
    auto it = appends_.find(length);
    if (it != appends_.end()) return it->second;
    const PathBasis& b = basis(length);
    const PathBasis& next = basis(length + 1);
    int ne = static_cast<int>(y_.bottom().edges().size());
    std::vector<std::vector<int>> tab(b.size(), std::vector<int>(ne, -1));
    for (int p = 0; p < b.size(); ++p) {
        auto path = b.paths[p];
        path.push_back(0);
        for (int e = 0; e < ne; ++e) {
            if (src_[e] != b.endpoint[p]) continue;
            path.back() = static_cast<std::uint16_t>(e);
            tab[p][e] = next.find(path);
        }
    }
    return appends_.emplace(length, std::move(tab)).first->second;
}

// Ascending orientation: the source path traverses the smaller direction
// first and supplies the (bottom, right) edges of the cell, the target the
// (left, top) edges. A descending flip is the adjoint, which makes reverse
// transports exact inverses.
const std::vector<Eigen::SparseMatrix<Complex>>& PathModel::flip(int length, int pos) {
    auto key = std::make_pair(length, pos);
    auto it = flips_.find(key);
    if (it != flips_.end()) return it->second;
    if (pos < 0 || pos + 1 >= length) throw std::invalid_argument("flip position out of range");

    const PathBasis& b = basis(length);
    const BipartiteGraph& k = y_.bottom();
    std::vector<std::vector<Eigen::Triplet<Complex>>> trips(nv_);
    for (int p = 0; p < b.size(); ++p) {
        int e1 = b.paths[p][pos];
        int e2 = b.paths[p][pos + 1];
        int v = src_[e1];
        int end2 = dst_[e2];
        auto modified = b.paths[p];
        for (int f : k.edges_at_even(v)) {
            for (int f2 : k.edges_at_even(dst_[f])) {
                if (dst_[f2] != end2) continue;
                modified[pos] = static_cast<std::uint16_t>(f);
                modified[pos + 1] = static_cast<std::uint16_t>(f2);
                int q = b.find(modified);
                if (q < 0) throw std::logic_error("flip target path missing from basis");
                Complex val = y_.cell(e1, f, e2, f2);
                if (val != Complex(0, 0))
                    trips[b.endpoint[p]].push_back(
                        {b.block_pos[q], b.block_pos[p], val});
            }
        }
    }
    std::vector<Eigen::SparseMatrix<Complex>> mats;
    for (int v = 0; v < nv_; ++v) {
        int n = static_cast<int>(b.by_endpoint[v].size());
        Eigen::SparseMatrix<Complex> m(n, n);
        m.setFromTriplets(trips[v].begin(), trips[v].end());
        mats.push_back(std::move(m));
    }
    return flips_.emplace(key, std::move(mats)).first->second;
}

TransportMatrix PathModel::identity_transport(int length) {
    const PathBasis& b = basis(length);
    TransportMatrix t;
    for (int v = 0; v < nv_; ++v) {
        int n = static_cast<int>(b.by_endpoint[v].size());
        t.blocks.push_back(Eigen::MatrixXcd::Identity(n, n));
    }
    return t;
}

TransportMatrix PathModel::elementary_transport(const std::vector<int>& word, int k) {
    std::vector<int> to = word;
    if (k < 0 || k + 1 >= static_cast<int>(word.size()))
        throw std::invalid_argument("elementary_transport: position out of range");
    if (word[k] == word[k + 1])
        throw std::invalid_argument("elementary_transport: equal letters at the flip position");
    std::swap(to[k], to[k + 1]);
    std::vector<int> moves{k};
    return transport(word, to, &moves);
}

TransportMatrix PathModel::transport(const std::vector<int>& from, const std::vector<int>& to,
                                     const std::vector<int>* moves) {
    std::vector<int> seq = moves ? *moves
                                 : sorting_moves(LatticePath{{}, from}, LatticePath{{}, to});
    int length = static_cast<int>(from.size());
    TransportMatrix t = identity_transport(length);
    t.from_word = from;
    t.to_word = to;
    std::vector<int> word = from;
    for (int p : seq) {
        if (p < 0 || p + 1 >= length) throw std::invalid_argument("transport: bad move");
        if (word[p] == word[p + 1])
            throw std::invalid_argument("transport: move swaps equal letters");
        bool ascending = word[p] < word[p + 1];
        const auto& f = flip(length, p);
        for (int v = 0; v < nv_; ++v) {
            if (t.blocks[v].rows() == 0) continue;
            t.blocks[v] = ascending ? (f[v] * t.blocks[v]).eval()
                                    : (f[v].adjoint() * t.blocks[v]).eval();
        }
        std::swap(word[p], word[p + 1]);
    }
    if (word != to) throw std::invalid_argument("transport: moves do not reach the target word");
    return t;
}

TransportMatrix PathModel::transport(const LatticePath& from, const LatticePath& to,
                                     const std::vector<int>* moves) {
    if (!moves && from.start != to.start)
        throw std::invalid_argument("transport: paths start at different points");
    return transport(from.word, to.word, moves);
}

CheckReport PathModel::check_well_defined(const std::vector<int>& from,
                                          const std::vector<int>& to, double tol,
                                          std::size_t route_cap) {
    auto routes = enumerate_minimal_move_sequences(from, to, route_cap);
    std::vector<TransportMatrix> ts;
    ts.reserve(routes.size());
    for (const auto& r : routes) ts.push_back(transport(from, to, &r));
    CheckReport rep;
    rep.name = "well-defined";
    rep.tol = tol;
    for (size_t i = 0; i < ts.size(); ++i)
        for (size_t j = i + 1; j < ts.size(); ++j)
            rep.residual = std::max(rep.residual, ts[i].max_abs_diff(ts[j]));
    std::ostringstream os;
    os << routes.size() << " minimal route(s)";
    rep.detail = os.str();
    return rep;
}

GramReport PathModel::gram_report(const std::vector<int>& from, const std::vector<int>& to) {
    TransportMatrix t = transport(from, to);
    GramReport g;
    auto [lo, hi] = t.singular_value_range();
    g.min_singular = lo;
    g.max_singular = hi;
    g.dimension = basis(static_cast<int>(from.size())).size();
    return g;
}

}  // namespace paragroup
