#include "paragroup/composite.hpp"

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace paragroup {

namespace {

std::map<std::string, double> merge_weights(const std::map<std::string, double>& a,
                                            const std::map<std::string, double>& b) {
    std::map<std::string, double> m = a;
    for (const auto& [k, v] : b) {
        auto [it, inserted] = m.emplace(k, v);
        if (!inserted && std::abs(it->second - v) > 1e-9)
            throw std::invalid_argument("compose: inconsistent PF weight at vertex " + k);
    }
    return m;
}

/// Keep only the weights of vertices that actually appear on the four sides.
std::map<std::string, double> restrict_weights(std::map<std::string, double> m,
                                               std::initializer_list<const BipartiteGraph*> gs) {
    std::set<std::string> keep;
    for (const BipartiteGraph* g : gs) {
        keep.insert(g->even_vertices().begin(), g->even_vertices().end());
        keep.insert(g->odd_vertices().begin(), g->odd_vertices().end());
    }
    for (auto it = m.begin(); it != m.end();)
        it = keep.count(it->first) ? std::next(it) : m.erase(it);
    return m;
}

int concat_edge_index(const BipartiteGraph& k, const std::string& a, const std::string& b) {
    int e = k.edge_index(a + "|" + b);
    if (e < 0) throw std::logic_error("composite edge " + a + "|" + b + " missing");
    return e;
}

}  // namespace

ConnectionSquare compose(const ConnectionSquare& a, const ConnectionSquare& b, Direction dir) {
    if (dir == Direction::horizontal) {
        if (!(a.right() == b.left()))
            throw std::invalid_argument("compose(horizontal): right(a) != left(b)");
        BipartiteGraph bot = concat_graphs(a.bottom(), transpose(b.bottom()));
        BipartiteGraph top = concat_graphs(a.top(), transpose(b.top()));

        // index cells of b by their left edge (the shared internal edge)
        std::vector<std::vector<std::pair<Cell, Complex>>> by_left(a.right().edges().size());
        for (const auto& [cb, vb] : b.cells()) by_left[cb.left].push_back({cb, vb});

        std::map<std::array<int, 4>, Complex> acc;
        for (const auto& [ca, va] : a.cells()) {
            for (const auto& [cb, vb] : by_left[ca.right]) {
                int cb_bot = concat_edge_index(bot, a.bottom().edges()[ca.bottom].id,
                                               b.bottom().edges()[cb.bottom].id);
                int cb_top = concat_edge_index(top, a.top().edges()[ca.top].id,
                                               b.top().edges()[cb.top].id);
                acc[{cb_bot, ca.left, cb.right, cb_top}] += va * vb;
            }
        }
        std::vector<std::pair<Cell, Complex>> cells;
        cells.reserve(acc.size());
        for (const auto& [k, v] : acc) cells.push_back({Cell{k[0], k[1], k[2], k[3]}, v});
        auto weights = restrict_weights(merge_weights(a.weights(), b.weights()),
                                        {&bot, &a.left(), &b.right(), &top});
        return ConnectionSquare(bot, a.left(), b.right(), top, std::move(weights),
                                std::move(cells));
    }

    if (!(a.top() == b.bottom()))
        throw std::invalid_argument("compose(vertical): top(a) != bottom(b)");
    BipartiteGraph lft = concat_graphs(a.left(), transpose(b.left()));
    BipartiteGraph rgt = concat_graphs(a.right(), transpose(b.right()));

    std::vector<std::vector<std::pair<Cell, Complex>>> by_bottom(a.top().edges().size());
    for (const auto& [cb, vb] : b.cells()) by_bottom[cb.bottom].push_back({cb, vb});

    std::map<std::array<int, 4>, Complex> acc;
    for (const auto& [ca, va] : a.cells()) {
        for (const auto& [cb, vb] : by_bottom[ca.top]) {
            int cb_left = concat_edge_index(lft, a.left().edges()[ca.left].id,
                                            b.left().edges()[cb.left].id);
            int cb_right = concat_edge_index(rgt, a.right().edges()[ca.right].id,
                                             b.right().edges()[cb.right].id);
            acc[{ca.bottom, cb_left, cb_right, cb.top}] += va * vb;
        }
    }
    std::vector<std::pair<Cell, Complex>> cells;
    cells.reserve(acc.size());
    for (const auto& [k, v] : acc) cells.push_back({Cell{k[0], k[1], k[2], k[3]}, v});
    auto weights = restrict_weights(merge_weights(a.weights(), b.weights()),
                                    {&a.bottom(), &lft, &rgt, &b.top()});
    return ConnectionSquare(a.bottom(), lft, rgt, b.top(), std::move(weights),
                            std::move(cells));
}

ConnectionSquare build_y(const ConnectionSquare& w) {
    if (!(w.bottom() == w.left()))
        throw std::invalid_argument("build_y: needs bottom == left so that all sides become K");
    if (!w.verified_tol) {
        CheckReport wrep = check_biunitarity(w, 1e-8);
        if (!wrep.pass())
            throw std::invalid_argument("build_y: input connection is not biunitary: " +
                                        wrep.detail);
    }
    ConnectionSquare w1 = renormalize(w, RenormMode::horizontal);
    ConnectionSquare w2 = renormalize(w, RenormMode::vertical);
    ConnectionSquare w3 = renormalize(w, RenormMode::both);
    ConnectionSquare bottom_row = compose(w, w1, Direction::horizontal);
    ConnectionSquare top_row = compose(w2, w3, Direction::horizontal);
    ConnectionSquare y = compose(bottom_row, top_row, Direction::vertical);
    if (!y.all_sides_equal()) throw std::logic_error("build_y: sides of Y differ");
    CheckReport rep = check_biunitarity(y, 1e-9);
    if (!rep.pass()) throw std::runtime_error("build_y: composite not biunitary: " + rep.detail);
    y.verified_tol = 1e-9;
    return y;
}

namespace {

/// Edge map of the identification K^t = K, "a|b" reversed -> "b|a".
std::vector<int> reversal_map(const BipartiteGraph& k) {
    std::vector<int> m(k.edges().size());
    for (size_t e = 0; e < k.edges().size(); ++e) {
        const std::string& id = k.edges()[e].id;
        auto bar = id.find('|');
        if (bar == std::string::npos || id.find('|', bar + 1) != std::string::npos)
            throw std::invalid_argument(
                "check_renorm_invariance: edge ids are not composite pairs");
        int r = k.edge_index(id.substr(bar + 1) + "|" + id.substr(0, bar));
        if (r < 0) throw std::invalid_argument("reversed edge missing for " + id);
        m[e] = r;
    }
    return m;
}

}  // namespace

CheckReport check_renorm_invariance(const ConnectionSquare& y, double tol) {
    if (!y.self_composable())
        throw std::invalid_argument("check_renorm_invariance: connection is not self-composable");
    std::vector<int> rev = reversal_map(y.bottom());

    CheckReport rep;
    rep.name = "renorm-invariance";
    rep.tol = tol;
    for (RenormMode mode : {RenormMode::horizontal, RenormMode::vertical, RenormMode::both}) {
        ConnectionSquare r = renormalize(y, mode);
        for (const auto& [c, v] : r.cells()) {
            Cell m = c;
            switch (mode) {
                case RenormMode::horizontal:
                    m.bottom = rev[c.bottom];
                    m.top = rev[c.top];
                    break;
                case RenormMode::vertical:
                    m.left = rev[c.left];
                    m.right = rev[c.right];
                    break;
                case RenormMode::both:
                    m = Cell{rev[c.bottom], rev[c.left], rev[c.right], rev[c.top]};
                    break;
            }
            double d = std::abs(v - y.cell(m));
            if (d > rep.residual) {
                rep.residual = d;
                std::ostringstream os;
                os << "mode " << (mode == RenormMode::horizontal ? "horizontal"
                                  : mode == RenormMode::vertical ? "vertical"
                                                                 : "both")
                   << " cell (" << y.bottom().edges()[m.bottom].id << ","
                   << y.left().edges()[m.left].id << "," << y.right().edges()[m.right].id
                   << "," << y.top().edges()[m.top].id << ")";
                rep.detail = os.str();
            }
        }
    }
    return rep;
}

}  // namespace paragroup
