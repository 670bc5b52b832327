#include <doctest.h>

#include "paragroup/composite.hpp"
#include "paragroup/fusion.hpp"
#include "paragroup/state_sum.hpp"

using namespace paragroup;

namespace {

Eigen::MatrixXcd dense_transport(PathModel& pm, const TransportMatrix& t, int length) {
    const PathBasis& b = pm.basis(length);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(b.size(), b.size());
    for (int v = 0; v < pm.vertex_count(); ++v) {
        const auto& idx = b.by_endpoint[v];
        for (size_t r = 0; r < idx.size(); ++r)
            for (size_t c = 0; c < idx.size(); ++c)
                m(idx[r], idx[c]) = t.blocks[v](static_cast<long>(r), static_cast<long>(c));
    }
    return m;
}

ConnectionSquare gybe_violating_control(std::uint64_t start_seed) {
    auto y = build_y(build_dynkin_connection(3));
    auto pf = perron_frobenius(y.bottom());
    for (std::uint64_t seed = start_seed; seed < start_seed + 64; ++seed) {
        auto c = build_random_biunitary(y.bottom(), pf, seed);
        if (check_gybe(c, 1e-9).residual > 0.01) return c;
    }
    throw std::runtime_error("no control found");
}

}  // namespace

TEST_SUITE("state_sum") {
    TEST_CASE("two-step transport blocks are the connection's corner matrices") {
        auto y = build_y(build_dynkin_connection(3));
        PathModel pm(y);
        auto t = pm.transport({0, 1}, {1, 0});
        const PathBasis& b = pm.basis(2);
        // T[eta, xi] = Y(bottom = xi_1, left = eta_1, right = xi_2, top = eta_2)
        for (int v = 0; v < pm.vertex_count(); ++v) {
            const auto& idx = b.by_endpoint[v];
            for (size_t r = 0; r < idx.size(); ++r)
                for (size_t c = 0; c < idx.size(); ++c) {
                    const auto& eta = b.paths[idx[r]];
                    const auto& xi = b.paths[idx[c]];
                    CHECK(std::abs(t.blocks[v](static_cast<long>(r), static_cast<long>(c)) -
                                   y.cell(xi[0], eta[0], xi[1], eta[1])) < 1e-14);
                }
        }
        CHECK(t.unitarity_residual() < 1e-9);
    }

    TEST_CASE("elementary transports are deltas off the flipped square") {
        auto y = build_y(build_dynkin_connection(3));
        PathModel pm(y);
        std::vector<int> word{0, 1, 2};
        auto t = pm.elementary_transport(word, 0);
        auto m = dense_transport(pm, t, 3);
        const PathBasis& b = pm.basis(3);
        for (int r = 0; r < b.size(); ++r)
            for (int c = 0; c < b.size(); ++c)
                if (b.paths[r][2] != b.paths[c][2])  // suffix must match
                    CHECK(m(r, c) == Complex(0, 0));
        CHECK_THROWS_AS(pm.elementary_transport({0, 0, 1}, 0), std::invalid_argument);
    }

    TEST_CASE("one-cell connection transports are 1x1 of modulus one") {
        auto y = build_y(build_dynkin_connection(2));
        PathModel pm(y);
        auto t = pm.transport({0, 1}, {1, 0});
        REQUIRE(t.blocks[0].rows() == 1);
        CHECK(std::abs(std::abs(t.blocks[0](0, 0)) - 1.0) < 1e-12);
    }

    TEST_CASE("identity, round trips, and factorization") {
        auto y = build_y(*builtin_connection("S3"));
        PathModel pm(y);
        auto id = pm.transport({0, 1, 2}, {0, 1, 2});
        CHECK(id.max_abs_diff(pm.identity_transport(3)) == 0.0);

        auto fwd = pm.transport({0, 1, 2}, {2, 1, 0});
        auto bwd = pm.transport({2, 1, 0}, {0, 1, 2});
        double round = 0;
        for (int v = 0; v < pm.vertex_count(); ++v) {
            if (fwd.blocks[v].rows() == 0) continue;
            round = std::max(round, (bwd.blocks[v] * fwd.blocks[v] -
                                     Eigen::MatrixXcd::Identity(fwd.blocks[v].rows(),
                                                                fwd.blocks[v].cols()))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        CHECK(round < 1e-9);
        CHECK(fwd.unitarity_residual() < 1e-9);

        // factorization through an intermediate word
        std::vector<int> mid{1, 0, 2};
        auto first = pm.transport({0, 1, 2}, mid);
        auto second = pm.transport(mid, {2, 1, 0});
        double fac = 0;
        for (int v = 0; v < pm.vertex_count(); ++v) {
            if (fwd.blocks[v].rows() == 0) continue;
            fac = std::max(fac,
                           (second.blocks[v] * first.blocks[v] - fwd.blocks[v])
                               .cwiseAbs()
                               .maxCoeff());
        }
        CHECK(fac < 1e-12);
    }

    TEST_CASE("word independence for the built-in composites") {
        for (const char* name : {"A3", "S3"}) {
            auto y = build_y(*builtin_connection(name));
            PathModel pm(y);
            CHECK(pm.check_well_defined({0, 1, 2}, {2, 1, 0}, 1e-9).pass());
        }
        auto y = build_y(build_dynkin_connection(3));
        PathModel pm(y);
        auto rep = pm.check_well_defined({0, 1, 2, 3}, {3, 2, 1, 0}, 1e-9);
        CHECK(rep.pass());
        CHECK(rep.detail == "16 minimal route(s)");
    }

    TEST_CASE("gram reports unitarity") {
        auto y = build_y(*builtin_connection("Z3"));
        PathModel pm(y);
        auto same = pm.gram_report({0, 1}, {0, 1});
        CHECK(same.min_singular == doctest::Approx(1.0));
        auto g = pm.gram_report({0, 1, 2}, {2, 1, 0});
        CHECK(g.report(1e-9).pass());
        CHECK(g.min_singular > 1.0 - 1e-9);
        CHECK(g.max_singular < 1.0 + 1e-9);
    }

    TEST_CASE("gybe failure and word dependence go together") {
        auto control = gybe_violating_control(0);
        double gybe_res = check_gybe(control, 1e-9).residual;
        PathModel pm(control);
        double wd_res = pm.check_well_defined({0, 1, 2}, {2, 1, 0}, 1e-9).residual;
        CHECK(gybe_res > 0.01);
        CHECK(wd_res > 0.01);

        auto y = build_y(build_dynkin_connection(3));
        PathModel good(y);
        CHECK(check_gybe(y, 1e-9).residual < 1e-9);
        CHECK(good.check_well_defined({0, 1, 2}, {2, 1, 0}, 1e-9).residual < 1e-9);
    }

    TEST_CASE("word independence with repeated letters") {
        auto y = build_y(build_dynkin_connection(3));
        PathModel pm(y);
        // both minimal routes swap disjoint positions
        auto rep = pm.check_well_defined({0, 1, 0, 1}, {1, 0, 1, 0}, 1e-9);
        CHECK(rep.pass());
        CHECK(rep.detail == "2 minimal route(s)");
        CHECK(pm.check_well_defined({0, 0, 1, 2}, {2, 1, 0, 0}, 1e-9).pass());
        CHECK(pm.check_well_defined({1, 0, 2, 0, 1}, {1, 2, 0, 0, 1}, 1e-9).pass());
    }

    TEST_CASE("invalid move sequences are rejected") {
        auto y = build_y(build_dynkin_connection(3));
        PathModel pm(y);
        std::vector<int> bad{0, 0};  // does not reach the target
        CHECK_THROWS_AS(pm.transport({0, 1, 2}, {2, 1, 0}, &bad), std::invalid_argument);
        std::vector<int> oob{5};
        CHECK_THROWS_AS(pm.transport({0, 1, 2}, {2, 1, 0}, &oob), std::invalid_argument);
    }

    TEST_CASE("path basis cap is enforced") {
        auto y = build_y(*builtin_connection("S3"));
        PathModel pm(y, 100);
        CHECK_NOTHROW(pm.basis(2));  // 36 paths
        CHECK_THROWS_AS(pm.basis(3), std::runtime_error);  // 216 paths
    }
}
