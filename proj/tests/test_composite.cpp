#include <doctest.h>

#include "paragroup/composite.hpp"
#include "paragroup/fusion.hpp"
#include "test_util.hpp"

using namespace paragroup;

namespace {

std::pair<std::string, std::string> split_pair(const std::string& id) {
    auto bar = id.find('|');
    REQUIRE(bar != std::string::npos);
    return {id.substr(0, bar), id.substr(bar + 1)};
}

/// Independent oracle: the four-block sum over the internal edges, computed
/// directly from W and its renormalizations with edge-id lookups.
Complex direct_y_cell(const ConnectionSquare& w, const ConnectionSquare& w1,
                      const ConnectionSquare& w2, const ConnectionSquare& w3,
                      const ConnectionSquare& y, const Cell& c) {
    auto [b1, b2] = split_pair(y.bottom().edges()[c.bottom].id);
    auto [l1, l2] = split_pair(y.left().edges()[c.left].id);
    auto [r1, r2] = split_pair(y.right().edges()[c.right].id);
    auto [t1, t2] = split_pair(y.top().edges()[c.top].id);

    Complex sum(0, 0);
    const auto& nu1s = w.right().edges();
    const auto& nu2s = w.top().edges();
    const auto& nu3s = w1.top().edges();
    const auto& nu4s = w2.right().edges();
    for (size_t n1 = 0; n1 < nu1s.size(); ++n1)
        for (size_t n2 = 0; n2 < nu2s.size(); ++n2)
            for (size_t n3 = 0; n3 < nu3s.size(); ++n3)
                for (size_t n4 = 0; n4 < nu4s.size(); ++n4) {
                    Complex a = w.cell(w.bottom().edge_index(b1), w.left().edge_index(l1),
                                       static_cast<int>(n1), static_cast<int>(n2));
                    if (a == Complex(0, 0)) continue;
                    Complex b = w1.cell(w1.bottom().edge_index(b2),
                                        w1.left().edge_index(nu1s[n1].id),
                                        w1.right().edge_index(r1),
                                        static_cast<int>(n3));
                    if (b == Complex(0, 0)) continue;
                    Complex d = w2.cell(w2.bottom().edge_index(nu2s[n2].id),
                                        w2.left().edge_index(l2), static_cast<int>(n4),
                                        w2.top().edge_index(t1));
                    if (d == Complex(0, 0)) continue;
                    Complex e = w3.cell(w3.bottom().edge_index(nu3s[n3].id),
                                        w3.left().edge_index(nu4s[n4].id),
                                        w3.right().edge_index(r2),
                                        w3.top().edge_index(t2));
                    sum += a * b * d * e;
                }
    return sum;
}

}  // namespace

TEST_SUITE("composite") {
    TEST_CASE("build_y equals the direct four-block state sum") {
        for (const char* name : {"A3", "Z2"}) {
            auto w = *builtin_connection(name);
            auto w1 = renormalize(w, RenormMode::horizontal);
            auto w2 = renormalize(w, RenormMode::vertical);
            auto w3 = renormalize(w, RenormMode::both);
            auto y = build_y(w);
            double worst = 0;
            for (const auto& [c, v] : y.cells())
                worst = std::max(worst, std::abs(v - direct_y_cell(w, w1, w2, w3, y, c)));
            CHECK(worst < 1e-12);
        }
    }

    TEST_CASE("Y of the one-edge diagram is a single cell of modulus one") {
        auto y = build_y(build_dynkin_connection(2));
        REQUIRE(y.cells().size() == 1);
        CHECK(std::abs(std::abs(y.cells()[0].second) - 1.0) < 1e-12);
        CHECK(y.all_sides_equal());
        CHECK(y.self_composable());
    }

    TEST_CASE("composites of biunitary connections are biunitary") {
        auto w = build_dynkin_connection(3);
        auto row = compose(w, renormalize(w, RenormMode::horizontal), Direction::horizontal);
        CHECK(check_biunitarity(row, 1e-9).pass());
        CHECK(check_biunitarity(build_y(w), 1e-9).pass());
        CHECK(check_biunitarity(build_y(build_group_connection(symmetric_group_3())), 1e-9)
                  .pass());
    }

    TEST_CASE("composite bottom adjacency is the product of adjacencies") {
        auto w = build_dynkin_connection(4);
        auto y = build_y(w);
        Eigen::MatrixXd expect = w.bottom().adjacency() * w.bottom().adjacency().transpose();
        CHECK((y.bottom().adjacency() - expect).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("self-composition of the one-cell connection keeps the cell value") {
        auto a2 = build_dynkin_connection(2);
        auto row = compose(a2, renormalize(a2, RenormMode::horizontal), Direction::horizontal);
        REQUIRE(row.cells().size() == 1);
        CHECK(std::abs(std::abs(row.cells()[0].second) - 1.0) < 1e-12);
    }

    TEST_CASE("compose rejects mismatched sides") {
        auto a3 = build_dynkin_connection(3);
        auto a4 = build_dynkin_connection(4);
        CHECK_THROWS_AS(compose(a3, a4, Direction::horizontal), std::invalid_argument);
        CHECK_THROWS_AS(compose(a3, a4, Direction::vertical), std::invalid_argument);
    }

    TEST_CASE("renormalization invariance of Y") {
        for (const char* name : {"A3", "A4", "Z2", "S3"}) {
            auto y = build_y(*builtin_connection(name));
            auto rep = check_renorm_invariance(y, 1e-9);
            CHECK(rep.pass());
            CHECK(rep.residual < 1e-12);
        }
    }

    TEST_CASE("unit weights make renormalization a bare reflect-and-conjugate") {
        auto y = build_y(*builtin_connection("Z2"));
        for (const auto& [k, v] : y.weights()) {
            (void)k;
            CHECK(v == 1.0);
        }
        auto w1 = renormalize(y, RenormMode::horizontal);
        double worst = 0;
        for (const auto& [c, v] : y.cells()) {
            Cell reflected{c.bottom, c.right, c.left, c.top};
            worst = std::max(worst, std::abs(w1.cell(reflected) - std::conj(v)));
        }
        CHECK(worst == 0.0);
    }

    TEST_CASE("gybe holds for built-in composites") {
        for (const char* name : {"A3", "A4", "Z2", "Z3", "S3"}) {
            auto y = build_y(*builtin_connection(name));
            auto rep = check_gybe(y, 1e-9);
            CHECK(rep.pass());
        }
    }

    TEST_CASE("build_y needs bottom == left") {
        BipartiteGraph bottom({"x"}, {"y"}, {{"b", "x", "y"}});
        BipartiteGraph left({"x"}, {"z1", "z2"}, {{"l1", "x", "z1"}, {"l2", "x", "z2"}});
        BipartiteGraph right({"y"}, {"w"}, {{"r", "y", "w"}});
        BipartiteGraph top({"z1", "z2"}, {"w"}, {{"t1", "z1", "w"}, {"t2", "z2", "w"}});
        std::map<std::string, double> mu{{"x", 1.0},
                                         {"y", 1.0},
                                         {"z1", 1 / std::sqrt(2.0)},
                                         {"z2", 1 / std::sqrt(2.0)},
                                         {"w", 1.0}};
        ConnectionSquare w(bottom, left, right, top, mu, {});
        CHECK_THROWS_AS(build_y(w), std::invalid_argument);
    }
}
