#include <doctest.h>

#include "paragroup/composite.hpp"
#include "paragroup/fusion.hpp"
#include "paragroup/string_algebra.hpp"
#include "test_util.hpp"

using namespace paragroup;

namespace {

StringModel model(const char* name, int cap = 4096) {
    return StringModel(build_y(*builtin_connection(name)), cap);
}

}  // namespace

TEST_SUITE("string_algebra") {
    TEST_CASE("matrix units multiply as string pairs") {
        auto sm = model("A3");
        LatticePoint n{1, 1};
        auto dims = sm.block_dims(n);
        for (const auto& [q, d] : dims) {
            if (d < 2) continue;
            auto u01 = sm.matrix_unit(n, q, 0, 1);
            auto u12 = sm.matrix_unit(n, q, 1, d - 1);
            auto prod = sm.multiply(u01, u12);  // (xi,eta)(eta,zeta) = (xi,zeta)
            CHECK(sm.frobenius_norm(prod - sm.matrix_unit(n, q, 0, d - 1)) == 0.0);
            // mismatched middle strings kill the product
            auto zero = sm.multiply(sm.matrix_unit(n, q, 0, 0), sm.matrix_unit(n, q, 1, 1));
            CHECK(sm.frobenius_norm(zero) == 0.0);
        }
        auto x = sm.random_element(n, 3);
        CHECK(sm.frobenius_norm(sm.multiply(sm.identity(n), x) - x) == 0.0);
        CHECK(sm.frobenius_norm(sm.multiply(x, sm.identity(n)) - x) == 0.0);
    }

    TEST_CASE("adjoint is conjugate linear on pairs") {
        auto sm = model("A3");
        LatticePoint n{1, 0};
        auto u = sm.matrix_unit(n, 0, 0, 0);
        Complex c(0.3, -0.8);
        auto lhs = sm.adjoint(c * u);
        auto rhs = std::conj(c) * sm.adjoint(u);
        CHECK(sm.frobenius_norm(lhs - rhs) == 0.0);
        auto x = sm.random_element({1, 1}, 5);
        auto y = sm.random_element({1, 1}, 6);
        // (xy)* = y* x*
        CHECK(sm.frobenius_norm(sm.adjoint(sm.multiply(x, y)) -
                                sm.multiply(sm.adjoint(y), sm.adjoint(x))) < 1e-12);
    }

    TEST_CASE("trace values") {
        auto sm = model("A3");
        CHECK(sm.trace(sm.identity({0, 0})).real() == doctest::Approx(1.0));

        // beta^2 = 2 for the composite of the 3-vertex diagram: diagonal pairs
        // at |n| = 1 have trace mu(r)/2
        LatticePoint n{1, 0};
        const auto& k = sm.connection().bottom();
        for (const auto& [q, d] : sm.block_dims(n))
            for (int a = 0; a < d; ++a) {
                double expect = sm.connection().mu(k.even_vertices()[q]) / 2.0;
                CHECK(sm.trace(sm.matrix_unit(n, q, a, a)).real() ==
                      doctest::Approx(expect).epsilon(1e-12));
            }
    }

    TEST_CASE("trace is normalized at every point") {
        for (const char* name : {"A3", "A4", "Z2", "S3"}) {
            auto sm = model(name, 8192);
            for (LatticePoint n : {LatticePoint{0, 0}, {1, 0}, {1, 1}, {2, 1}, {1, 2}})
                CHECK(sm.trace(sm.identity(n)).real() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("trace is tracial and faithful") {
        auto sm = model("S3");
        LatticePoint n{1, 1};
        auto x = sm.random_element(n, 11);
        auto y = sm.random_element(n, 12);
        CHECK(std::abs(sm.trace(sm.multiply(x, y)) - sm.trace(sm.multiply(y, x))) < 1e-10);
        CHECK(sm.inner(x, x).real() > 0.0);
        // gram of the canonical unit basis is diagonal and positive
        for (const auto& [q, d] : sm.block_dims(n))
            for (int a = 0; a < d; ++a) {
                auto u = sm.matrix_unit(n, q, a, a);
                CHECK(sm.inner(u, u).real() > 0.0);
            }
    }

    TEST_CASE("embedding is a unital trace-preserving *-homomorphism") {
        auto sm = model("A3");
        for (int dir : {0, 1}) {
            for (LatticePoint n : {LatticePoint{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
                auto id = sm.identity(n);
                CHECK(sm.frobenius_norm(sm.embed(id, dir) -
                                        sm.identity(add_unit(n, dir))) < 1e-12);
                for (std::uint64_t seed = 0; seed < 13; ++seed) {
                    auto x = sm.random_element(n, seed);
                    auto y = sm.random_element(n, seed + 1000);
                    CHECK(std::abs(sm.trace(sm.embed(x, dir)) - sm.trace(x)) < 1e-10);
                    CHECK(sm.frobenius_norm(sm.embed(sm.multiply(x, y), dir) -
                                            sm.multiply(sm.embed(x, dir), sm.embed(y, dir))) <
                          1e-10);
                    CHECK(sm.frobenius_norm(sm.embed(sm.adjoint(x), dir) -
                                            sm.adjoint(sm.embed(x, dir))) < 1e-10);
                }
            }
        }
    }

    TEST_CASE("embedding is injective") {
        auto sm = model("A3");
        LatticePoint n{1, 0};
        std::vector<StringElement> embedded;
        int dim = 0;
        for (const auto& [q, d] : sm.block_dims(n)) {
            dim += d * d;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    embedded.push_back(sm.embed(sm.matrix_unit(n, q, a, b), 1));
        }
        CHECK(test_util::span_rank(embedded) == dim);
    }

    TEST_CASE("conditional expectation matches the weight formula") {
        auto sm = model("A3");
        // at n = (1,0), direction 0: the canonical basis of (2,0) is already
        // factored as (xi . gamma)
        LatticePoint big{2, 0};
        const PathBasis& b2 = sm.paths().basis(2);
        const PathBasis& b1 = sm.paths().basis(1);
        const auto& k = sm.connection().bottom();
        double beta = sm.paths().beta();
        for (const auto& [q, d] : sm.block_dims(big)) {
            for (int a = 0; a < d; ++a)
                for (int c = 0; c < d; ++c) {
                    auto e = sm.cond_expect(sm.matrix_unit(big, q, a, c), 0);
                    const auto& pa = b2.paths[b2.by_endpoint[q][a]];
                    const auto& pc = b2.paths[b2.by_endpoint[q][c]];
                    StringElement expect = sm.zero({1, 0});
                    if (pa[1] == pc[1]) {
                        int src = sm.paths().edge_src(pa[1]);
                        double w = sm.connection().mu(k.even_vertices()[q]) /
                                   (beta * sm.connection().mu(k.even_vertices()[src]));
                        int ia = b1.find({pa[0]});
                        int ic = b1.find({pc[0]});
                        expect.blocks[src](b1.block_pos[ia], b1.block_pos[ic]) = w;
                    }
                    CHECK(sm.frobenius_norm(e - expect) < 1e-13);
                }
        }
    }

    TEST_CASE("conditional expectation properties") {
        auto sm = model("S3");
        LatticePoint n{1, 0};
        int dir = 1;
        auto id_big = sm.identity(add_unit(n, dir));
        CHECK(sm.frobenius_norm(sm.cond_expect(id_big, dir) - sm.identity(n)) < 1e-12);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto x = sm.random_element(add_unit(n, dir), seed);
            CHECK(std::abs(sm.trace(sm.cond_expect(x, dir)) - sm.trace(x)) < 1e-10);
        }
        // E(a x b) = a E(x) b for a, b from the image algebra
        auto a = sm.embed(sm.random_element(n, 7), dir);
        auto b = sm.embed(sm.random_element(n, 8), dir);
        auto x = sm.random_element(add_unit(n, dir), 9);
        auto lhs = sm.cond_expect(sm.multiply(sm.multiply(a, x), b), dir);
        auto rhs = sm.multiply(sm.multiply(sm.random_element(n, 7), sm.cond_expect(x, dir)),
                               sm.random_element(n, 8));
        CHECK(sm.frobenius_norm(lhs - rhs) < 1e-9);
        // E restricted to the image inverts the embedding
        auto y = sm.random_element(n, 10);
        CHECK(sm.frobenius_norm(sm.cond_expect(sm.embed(y, dir), dir) - y) < 1e-10);
    }

    TEST_CASE("commuting squares at small points") {
        CHECK(model("A3").check_commuting_square({0, 0}, 0, 1, 1e-9).pass());
        CHECK(model("Z2").check_commuting_square({1, 0}, 0, 1, 1e-9).pass());
        CHECK(model("S3").check_commuting_square({0, 0}, 0, 1, 1e-9).pass());
    }

    TEST_CASE("Choi residual and the direct route difference agree") {
        auto sm = model("A3");
        LatticePoint n{0, 0};
        auto direct = [&](StringModel& m, const LatticePoint& pt, int i, int j) {
            double worst = 0;
            for (const auto& [q, d] : m.block_dims(add_unit(pt, i)))
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        auto x = m.matrix_unit(add_unit(pt, i), q, a, b);
                        auto r1 = m.cond_expect(m.embed(x, j), i);
                        auto r2 = m.embed(m.cond_expect(x, i), j);
                        worst = std::max(worst, m.frobenius_norm(r1 - r2));
                    }
            return worst;
        };
        double d_ok = direct(sm, n, 0, 1);
        double c_ok = sm.check_commuting_square(n, 0, 1, 1e-9).residual;
        CHECK(d_ok < 1e-12);
        CHECK(c_ok < 1e-12);

        // break the connection (no longer biunitary): both detectors fire
        auto y = build_y(build_dynkin_connection(3));
        auto cells = y.cells();
        cells[0].second *= 1.5;
        ConnectionSquare broken(y.bottom(), y.left(), y.right(), y.top(), y.weights(),
                                std::move(cells));
        StringModel bm(broken);
        double d_bad = direct(bm, n, 0, 1);
        double c_bad = bm.check_commuting_square(n, 0, 1, 1e-9).residual;
        CHECK(d_bad > 1e-3);
        CHECK(c_bad > 1e-3);
    }

    TEST_CASE("corner join dimension matches brute-force closure") {
        auto sm = model("A3");
        int n = 1, s = 2;
        auto join = sm.corner_join(n, s);

        // oracle: exhaustive span closure by rank computation
        LatticePoint amb(s, n);
        std::vector<StringElement> gens{sm.identity(amb)};
        for (int i = 0; i < s; ++i) {
            LatticePoint p(s, 0);
            p[i] = n;
            for (const auto& [q, d] : sm.block_dims(p))
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        gens.push_back(sm.embed_to(sm.matrix_unit(p, q, a, b), amb));
        }
        std::vector<StringElement> closure = gens;
        int rank = test_util::span_rank(closure);
        while (true) {
            size_t snapshot = closure.size();
            std::vector<StringElement> next = closure;
            for (size_t i = 0; i < snapshot; ++i)
                for (size_t j = 0; j < snapshot; ++j)
                    next.push_back(sm.multiply(closure[i], closure[j]));
            int r2 = test_util::span_rank(next);
            closure = std::move(next);
            if (r2 == rank) break;
            rank = r2;
        }
        CHECK(join.dimension() == rank);

        // s = 1: the join is the algebra itself
        auto single = sm.corner_join(1, 1);
        int full = 0;
        for (const auto& [q, d] : sm.block_dims(LatticePoint{1})) full += d * d;
        CHECK(single.dimension() == full);
    }

    TEST_CASE("corner algebras commute inside the join") {
        for (const char* name : {"A3", "S3"}) {
            auto sm = model(name);
            auto rep = sm.check_flat_commutation(1, 1, 0, 1, 1e-9);
            CHECK(rep.pass());
        }
    }

    TEST_CASE("multileg and floor squares") {
        auto z2 = model("Z2");
        CHECK(z2.check_multileg_square(0, 2, 1e-9).pass());
        CHECK(z2.check_multileg_square(1, 2, 1e-9).pass());
        CHECK(z2.check_multileg_square(0, 3, 1e-9).pass());
        CHECK(z2.check_floor_square(0, 1, 3, 1e-9).pass());
        CHECK(z2.check_floor_square(0, 2, 3, 1e-9).pass());

        // the floor square with the two-direction shape is the multileg square
        auto f = z2.check_floor_square(1, 1, 2, 1e-9);
        auto m = z2.check_multileg_square(1, 2, 1e-9);
        CHECK(f.residual == m.residual);

        auto a3 = model("A3");
        CHECK(a3.check_multileg_square(0, 2, 1e-9).pass());
        CHECK(a3.check_multileg_square(1, 2, 1e-9).pass());
        CHECK(a3.check_floor_square(0, 2, 3, 1e-9).pass());
    }

    TEST_CASE("trace gram matrix of the unit basis is positive definite") {
        auto sm = model("A3");
        LatticePoint n{1, 1};
        std::vector<StringElement> units;
        for (const auto& [q, d] : sm.block_dims(n))
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) units.push_back(sm.matrix_unit(n, q, a, b));
        Eigen::MatrixXcd gram(units.size(), units.size());
        for (size_t i = 0; i < units.size(); ++i)
            for (size_t j = 0; j < units.size(); ++j)
                gram(static_cast<long>(i), static_cast<long>(j)) =
                    sm.inner(units[i], units[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }

    TEST_CASE("argument validation") {
        auto sm = model("Z2");
        CHECK_THROWS_AS(sm.check_commuting_square({0, 0}, 1, 1, 1e-9), std::invalid_argument);
        CHECK_THROWS_AS(sm.check_floor_square(0, 0, 3, 1e-9), std::invalid_argument);
        CHECK_THROWS_AS(sm.cond_expect(sm.identity({0, 0}), 0), std::invalid_argument);
        CHECK_THROWS_AS(sm.embed_to(sm.identity({1, 1}), {0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(sm.multiply(sm.identity({1, 0}), sm.identity({0, 1})),
                        std::invalid_argument);
    }
}
