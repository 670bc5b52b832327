// Acceptance suite: one criterion per line, each pinned to its tolerance and
// runtime budget. Run with no arguments for all criteria or with a criterion
// number (1..11). Exit code = number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paragroup/composite.hpp"
#include "paragroup/connection.hpp"
#include "paragroup/fusion.hpp"
#include "paragroup/lattice.hpp"
#include "paragroup/state_sum.hpp"
#include "paragroup/string_algebra.hpp"

using namespace paragroup;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream info;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!ok) info << " [FAILED: " << what << "]";
    }
};

ConnectionSquare y_of(const char* name) { return build_y(*builtin_connection(name)); }

/// Deterministic control: seeded random biunitary connection on K(A_3) that
/// violates the Yang-Baxter equation and cross-corner commutation.
ConnectionSquare control_connection() {
    auto k = y_of("A3").bottom();
    auto pf = perron_frobenius(k);
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        auto c = build_random_biunitary(k, pf, seed);
        if (check_biunitarity(c, 1e-10).residual > 1e-11) continue;
        if (check_gybe(c, 1e-9).residual <= 0.01) continue;
        StringModel sm(c);
        if (sm.check_flat_commutation(1, 1, 0, 1, 1e-9).residual <= 0.01) continue;
        return c;
    }
    throw std::runtime_error("no control connection found");
}

// 1. biunitarity of the built-in connections, residual < 1e-10, < 1 s each
Outcome criterion1() {
    Outcome out;
    for (const char* name : {"A2", "A3", "A4", "Z2", "Z3", "S3"}) {
        auto t0 = Clock::now();
        auto w = *builtin_connection(name);
        auto rep = check_biunitarity(w, 1e-10);
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        out.info << " " << name << "=" << rep.residual;
        out.require(rep.pass(), std::string(name) + " residual");
        out.require(secs < 1.0, std::string(name) + " runtime");
    }
    return out;
}

// 2. Yang-Baxter for the composites, < 1e-9; control fails > 0.01; < 10 s each
Outcome criterion2() {
    Outcome out;
    for (const char* name : {"A3", "A4", "S3"}) {
        auto y = y_of(name);
        auto t0 = Clock::now();
        auto rep = check_gybe(y, 1e-9);
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        out.info << " Y(" << name << ")=" << rep.residual;
        out.require(rep.pass(), std::string("Y(") + name + ")");
        out.require(secs < 10.0, std::string(name) + " runtime");
    }
    auto control = control_connection();
    auto rep = check_gybe(control, 1e-9);
    out.info << " control=" << rep.residual;
    out.require(rep.residual > 0.01, "control must fail");
    return out;
}

// 3. renormalization invariance of Y, < 1e-9
Outcome criterion3() {
    Outcome out;
    for (const char* name : {"A3", "A4", "Z2", "S3"}) {
        auto rep = check_renorm_invariance(y_of(name), 1e-9);
        out.info << " Y(" << name << ")=" << rep.residual;
        out.require(rep.pass(), std::string("Y(") + name + ")");
    }
    return out;
}

// 4. word independence: both words of w0(S3) and all 16 of w0(S4), < 60 s
Outcome criterion4() {
    Outcome out;
    auto t0 = Clock::now();
    for (const char* name : {"A3", "S3"}) {
        StringModel sm(y_of(name), 8192);
        auto r3 = sm.paths().check_well_defined({0, 1, 2}, {2, 1, 0}, 1e-9);
        auto r4 = sm.paths().check_well_defined({0, 1, 2, 3}, {3, 2, 1, 0}, 1e-9);
        out.info << " Y(" << name << ") s3=" << r3.residual << " s4=" << r4.residual;
        out.require(r3.pass() && r4.pass(), std::string("Y(") + name + ")");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.info << " time=" << secs << "s";
    out.require(secs < 60.0, "runtime");
    return out;
}

// 5. non-degeneracy: all transport singular values within 1e-9 of 1
Outcome criterion5() {
    Outcome out;
    for (const char* name : {"A3", "S3"}) {
        StringModel sm(y_of(name), 8192);
        auto g3 = sm.paths().gram_report({0, 1, 2}, {2, 1, 0});
        auto g4 = sm.paths().gram_report({0, 1, 2, 3}, {3, 2, 1, 0});
        double worst = std::max(std::max(std::abs(g3.min_singular - 1), std::abs(g3.max_singular - 1)),
                                std::max(std::abs(g4.min_singular - 1), std::abs(g4.max_singular - 1)));
        out.info << " Y(" << name << ")=" << worst;
        out.require(worst < 1e-9, std::string("Y(") + name + ")");
    }
    return out;
}

// 6. commuting squares, < 5 min total
Outcome criterion6() {
    Outcome out;
    auto t0 = Clock::now();
    for (const char* name : {"A3", "Z2", "S3"}) {
        StringModel sm(y_of(name), 8192);
        double worst = 0;
        for (int n0 = 0; n0 <= 2; ++n0)
            for (int n1 = 0; n0 + n1 <= 2; ++n1)
                for (auto [i, j] : {std::pair{0, 1}, {1, 0}}) {
                    auto rep = sm.check_commuting_square({n0, n1}, i, j, 1e-9);
                    worst = std::max(worst, rep.residual);
                    out.require(rep.pass(), std::string(name) + " n=(" + std::to_string(n0) +
                                                "," + std::to_string(n1) + ")");
                }
        out.info << " corner(" << name << ")=" << worst;
    }
    for (const char* name : {"Z2", "A3"}) {
        StringModel sm(y_of(name), 8192);
        double worst = 0;
        for (int n : {0, 1}) worst = std::max(worst, sm.check_multileg_square(n, 2, 1e-9).residual);
        worst = std::max(worst, sm.check_multileg_square(0, 3, 1e-9).residual);
        out.info << " multileg(" << name << ")=" << worst;
        out.require(worst < 1e-9, std::string("multileg ") + name);
    }
    {
        StringModel sm(y_of("Z2"), 8192);
        double worst = 0;
        for (int j : {1, 2}) worst = std::max(worst, sm.check_floor_square(0, j, 3, 1e-9).residual);
        out.info << " floor(Z2)=" << worst;
        out.require(worst < 1e-9, "floor Z2");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.info << " time=" << secs << "s";
    out.require(secs < 300.0, "runtime");
    return out;
}

// 7. flatness proxy: cross-corner commutators, control fails
Outcome criterion7() {
    Outcome out;
    for (const char* name : {"A3", "S3"}) {
        StringModel sm(y_of(name), 8192);
        auto rep = sm.check_flat_commutation(1, 1, 0, 1, 1e-9);
        out.info << " Y(" << name << ")=" << rep.residual;
        out.require(rep.pass(), std::string("Y(") + name + ")");
    }
    StringModel control(control_connection());
    auto rep = control.check_flat_commutation(1, 1, 0, 1, 1e-9);
    out.info << " control=" << rep.residual;
    out.require(rep.residual > 0.01, "control must fail");
    return out;
}

// 8. Bratteli Perron-Frobenius data for s in {2,3}
Outcome criterion8() {
    Outcome out;
    for (const char* name : {"trivial", "Z2", "Z3", "S3", "fib"}) {
        auto f = *builtin_fusion(name);
        for (int s : {2, 3}) {
            auto d = build_bratteli(f, s);
            auto pf = check_pf(d, f, s, 1e-9);
            out.require(pf.report(1e-9).pass(),
                        std::string(name) + " s=" + std::to_string(s));
            if (s == 3)
                out.info << " " << name << "=" << std::max(pf.sv_residual, pf.eigen_residual);
        }
    }
    // the Z_2, s = 2 instance pinned numerically
    auto z2 = cyclic_ring(2);
    auto d = build_bratteli(z2, 2);
    auto pf = check_pf(d, z2, 2, 1e-9);
    out.require(std::abs(pf.beta_l - std::sqrt(2.0)) < 1e-12, "Z2 beta_L = sqrt(2)");
    Eigen::VectorXd tuples = Eigen::VectorXd::Ones(4);
    Eigen::VectorXd singles = std::sqrt(2.0) * Eigen::VectorXd::Ones(2);
    double e1 = (d.mult * singles - std::sqrt(2.0) * tuples).cwiseAbs().maxCoeff();
    double e2 = (d.mult.transpose() * tuples - std::sqrt(2.0) * singles).cwiseAbs().maxCoeff();
    out.info << " Z2(s=2) mu_L=(1,1,1,1|sqrt2,sqrt2) residual=" << std::max(e1, e2);
    out.require(std::max(e1, e2) < 1e-12, "Z2 mu_L");
    return out;
}

// 9. index values against the independent global index
Outcome criterion9() {
    Outcome out;
    auto omega = [](const FusionRing& f) {
        double w = 0;
        for (double d : f.dims) w += d * d;
        return w;
    };
    auto z2 = cyclic_ring(2);
    auto s3 = s3_ring();
    double i_z2 = index_report(z2, 3);
    double i_s3 = index_report(s3, 2);
    out.info << " Z2(s=3)=" << i_z2 << " S3(s=2)=" << i_s3;
    out.require(std::abs(i_z2 - 4.0) < 1e-12, "Z2 s=3 index 4");
    out.require(std::abs(i_s3 - 6.0) < 1e-12, "S3 s=2 index 6");
    out.require(std::abs(i_z2 - std::pow(omega(z2), 2)) < 1e-12, "Z2 omega^2");
    out.require(std::abs(i_s3 - omega(s3)) < 1e-12, "S3 omega");
    return out;
}

// 10. fusion identity for every label and s <= 4, with the s=2 double sum
Outcome criterion10() {
    Outcome out;
    for (const char* name : {"trivial", "Z2", "Z3", "S3", "fib", "su2e4"}) {
        auto f = *builtin_fusion(name);
        double worst = 0;
        for (int s = 1; s <= 4; ++s)
            for (int lab = 0; lab < f.label_count(); ++lab) {
                auto rep = fusion_identity_check(f, s, lab, 1e-9);
                worst = std::max(worst, rep.residual);
                out.require(rep.pass(), std::string(name) + " s=" + std::to_string(s));
            }
        // brute-force double sum at s = 2
        for (int lab = 0; lab < f.label_count(); ++lab) {
            double lhs = 0;
            for (int a = 0; a < f.label_count(); ++a)
                for (int b = 0; b < f.label_count(); ++b)
                    lhs += f.fusion(a, b, lab) * f.dims[a] * f.dims[b];
            double omega = 0;
            for (double d : f.dims) omega += d * d;
            out.require(std::abs(lhs - omega * f.dims[lab]) < 1e-9,
                        std::string(name) + " s=2 double sum");
        }
        out.info << " " << name << "=" << worst;
    }
    return out;
}

// 11. combinatorial oracles: reduced word counts and move-graph connectivity
Outcome criterion11() {
    Outcome out;
    auto brute = [](const Permutation& sigma) {
        int s = static_cast<int>(sigma.size());
        int l = permutation_length(sigma);
        if (l == 0) return 1L;
        long count = 0;
        std::vector<int> word(l, 0);
        while (true) {
            if (evaluate_word(word, s) == sigma) ++count;
            int pos = l - 1;
            while (pos >= 0 && ++word[pos] == s - 1) word[pos--] = 0;
            if (pos < 0) break;
        }
        return count;
    };
    out.info << " w0(S3)=" << enumerate_reduced_words({2, 1, 0}).size()
             << " w0(S4)=" << enumerate_reduced_words({3, 2, 1, 0}).size();
    out.require(enumerate_reduced_words({2, 1, 0}).size() == 2, "w0(S3) count");
    out.require(brute({2, 1, 0}) == 2, "w0(S3) brute force");
    out.require(enumerate_reduced_words({3, 2, 1, 0}).size() == 16, "w0(S4) count");
    out.require(brute({3, 2, 1, 0}) == 16, "w0(S4) brute force");

    for (int s = 2; s <= 5; ++s) {
        Permutation p(s);
        for (int i = 0; i < s; ++i) p[i] = i;
        bool connected = true;
        do {
            auto words = enumerate_reduced_words(p);
            std::set<std::vector<int>> all;
            for (const auto& w : words) all.insert(w.letters);
            std::set<std::vector<int>> seen{words[0].letters};
            std::vector<std::vector<int>> stack{words[0].letters};
            while (!stack.empty()) {
                auto cur = stack.back();
                stack.pop_back();
                for (auto& [mv, nxt] : word_neighbors(cur)) {
                    (void)mv;
                    if (all.count(nxt) && !seen.count(nxt)) {
                        seen.insert(nxt);
                        stack.push_back(nxt);
                    }
                }
            }
            connected = connected && seen.size() == all.size();
        } while (std::next_permutation(p.begin(), p.end()));
        out.info << " S" << s << (connected ? " connected" : " DISCONNECTED");
        out.require(connected, "move graph S" + std::to_string(s));
    }
    return out;
}

struct Criterion {
    int id;
    const char* text;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> cs = {
        {1, "biunitarity of built-in connections (residual < 1e-10, < 1 s each)", criterion1},
        {2, "Yang-Baxter residuals (< 1e-9; control > 0.01; < 10 s each)", criterion2},
        {3, "renormalization invariance of the composites (< 1e-9)", criterion3},
        {4, "transport word-independence, s=3 and s=4 (< 1e-9, < 60 s)", criterion4},
        {5, "transport singular values within 1e-9 of 1", criterion5},
        {6, "commuting squares: corner, multileg, floor (< 1e-9, < 5 min)", criterion6},
        {7, "cross-corner flatness (< 1e-9; control > 0.01)", criterion7},
        {8, "Bratteli PF eigenvalue omega^((s-1)/2) and weights (< 1e-9)", criterion8},
        {9, "multiple-inclusion index omega^(s-1)", criterion9},
        {10, "fusion identity for all labels, s <= 4 (< 1e-9)", criterion10},
        {11, "reduced word counts and move-graph connectivity (s <= 5)", criterion11},
    };
    return cs;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    int failures = 0;
    for (const auto& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        auto t0 = Clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.info << " [exception: " << e.what() << "]";
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("criterion %2d %s: %s (%.1fs)%s\n", c.id, c.text,
                    out.pass ? "PASS" : "FAIL", secs, out.info.str().c_str());
        if (!out.pass) ++failures;
    }
    return failures;
}
