#include "paragroup/fusion.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace paragroup {

int FusionRing::label_index(const std::string& s) const {
    for (int i = 0; i < label_count(); ++i)
        if (labels[i] == s) return i;
    return -1;
}

CheckReport validate_fusion(const FusionRing& f, double tol) {
    CheckReport rep;
    rep.name = "fusion-ring";
    rep.tol = tol;
    std::ostringstream bad;

    int l = f.label_count();
    if (l == 0 || f.unit < 0 || f.unit >= l ||
        f.n.size() != static_cast<size_t>(l) * l * l ||
        f.dims.size() != static_cast<size_t>(l)) {
        rep.structural_ok = false;
        rep.detail = "malformed ring data";
        return rep;
    }
    for (double d : f.dims)
        if (!(d > 0)) {
            rep.structural_ok = false;
            bad << "non-positive dimension; ";
        }
    for (int v : f.n)
        if (v < 0) {
            rep.structural_ok = false;
            bad << "negative structure constant; ";
        }
    for (int j = 0; j < l && rep.structural_ok; ++j)
        for (int k = 0; k < l; ++k) {
            if (f.fusion(f.unit, j, k) != (j == k ? 1 : 0) ||
                f.fusion(j, f.unit, k) != (j == k ? 1 : 0)) {
                rep.structural_ok = false;
                bad << "unit law fails at (" << f.labels[j] << "," << f.labels[k] << "); ";
                break;
            }
        }
    for (int i = 0; i < l && rep.structural_ok; ++i)
        for (int j = 0; j < l && rep.structural_ok; ++j)
            for (int k = 0; k < l && rep.structural_ok; ++k)
                for (int m = 0; m < l; ++m) {
                    long a = 0, b = 0;
                    for (int z = 0; z < l; ++z) {
                        a += static_cast<long>(f.fusion(i, j, z)) * f.fusion(z, k, m);
                        b += static_cast<long>(f.fusion(j, k, z)) * f.fusion(i, z, m);
                    }
                    if (a != b) {
                        rep.structural_ok = false;
                        bad << "associativity fails at (" << f.labels[i] << "," << f.labels[j]
                            << "," << f.labels[k] << " -> " << f.labels[m] << "); ";
                        break;
                    }
                }
    if (rep.structural_ok) {
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j) {
                double s = 0;
                for (int k = 0; k < l; ++k) s += f.fusion(i, j, k) * f.dims[k];
                rep.residual = std::max(rep.residual, std::abs(s - f.dims[i] * f.dims[j]));
            }
    }
    rep.detail = rep.structural_ok ? "dimension homomorphism residual" : bad.str();
    return rep;
}

double global_index(const FusionRing& f) {
    double w = 0;
    for (double d : f.dims) w += d * d;
    return w;
}

std::vector<long> multi_fusion(const FusionRing& f, const std::vector<int>& tuple) {
    int l = f.label_count();
    std::vector<long> acc(l, 0);
    acc[f.unit] = 1;
    for (int x : tuple) {
        if (x < 0 || x >= l) throw std::invalid_argument("multi_fusion: label out of range");
        std::vector<long> next(l, 0);
        for (int z = 0; z < l; ++z) {
            if (acc[z] == 0) continue;
            for (int y = 0; y < l; ++y) next[y] += acc[z] * f.fusion(z, x, y);
        }
        acc = std::move(next);
    }
    return acc;
}

BratteliDiagram build_bratteli(const FusionRing& f, int s, std::size_t cap) {
    if (s < 1) throw std::invalid_argument("build_bratteli: s >= 1");
    int l = f.label_count();
    double count = std::pow(static_cast<double>(l), s);
    if (count > static_cast<double>(cap))
        throw std::runtime_error("build_bratteli: |labels|^s exceeds cap");

    BratteliDiagram d;
    d.s = s;
    d.label_count = l;
    std::vector<int> tuple(s, 0);
    while (true) {
        d.tuples.push_back(tuple);
        int pos = s - 1;
        while (pos >= 0 && ++tuple[pos] == l) tuple[pos--] = 0;
        if (pos < 0) break;
    }
    d.mult.resize(static_cast<long>(d.tuples.size()), l);
    for (size_t t = 0; t < d.tuples.size(); ++t) {
        auto row = multi_fusion(f, d.tuples[t]);
        for (int y = 0; y < l; ++y) d.mult(static_cast<long>(t), y) = static_cast<double>(row[y]);
    }
    return d;
}

CheckReport PfReport::report(double tol) const {
    CheckReport rep;
    rep.name = "bratteli-pf";
    rep.tol = tol;
    rep.residual = std::max(sv_residual, eigen_residual);
    std::ostringstream os;
    os << "beta_L=" << beta_l << " expected=" << expected
       << (irreducible ? " irreducible" : " not-irreducible");
    rep.detail = os.str();
    return rep;
}

PfReport check_pf(const BratteliDiagram& l, const FusionRing& f, int s, double tol) {
    (void)tol;
    if (l.s != s || l.label_count != f.label_count())
        throw std::invalid_argument("check_pf: diagram does not match ring and s");
    PfReport r;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(l.mult);
    r.beta_l = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    r.expected = std::pow(global_index(f), (s - 1) / 2.0);
    r.sv_residual = std::abs(r.beta_l - r.expected);

    Eigen::VectorXd mu_t(l.mult.rows()), mu_s(l.mult.cols());
    for (long t = 0; t < l.mult.rows(); ++t) {
        double p = 1.0;
        for (int x : l.tuples[t]) p *= f.dims[x];
        mu_t(t) = p;
    }
    for (int y = 0; y < f.label_count(); ++y) mu_s(y) = r.expected * f.dims[y];
    double e1 = (l.mult * mu_s - r.expected * mu_t).cwiseAbs().maxCoeff();
    double e2 = (l.mult.transpose() * mu_t - r.expected * mu_s).cwiseAbs().maxCoeff();
    r.eigen_residual = std::max(e1, e2);

    std::vector<int> unit_tuple(s, f.unit);
    auto row = multi_fusion(f, unit_tuple);
    r.irreducible = row[f.unit] == 1;
    return r;
}

double index_report(const FusionRing& f, int s) {
    if (s < 1) throw std::invalid_argument("index_report: s >= 1");
    return std::pow(global_index(f), s - 1);
}

CheckReport fusion_identity_check(const FusionRing& f, int s, int label, double tol,
                                  std::size_t cap) {
    if (label < 0 || label >= f.label_count())
        throw std::invalid_argument("fusion_identity_check: label out of range");
    int l = f.label_count();
    double count = std::pow(static_cast<double>(l), s);
    if (count > static_cast<double>(cap))
        throw std::runtime_error("fusion_identity_check: |labels|^s exceeds cap");

    double lhs = 0;
    std::vector<int> tuple(s, 0);
    while (true) {
        auto row = multi_fusion(f, tuple);
        if (row[label] != 0) {
            double p = 1.0;
            for (int x : tuple) p *= f.dims[x];
            lhs += static_cast<double>(row[label]) * p;
        }
        int pos = s - 1;
        while (pos >= 0 && ++tuple[pos] == l) tuple[pos--] = 0;
        if (pos < 0) break;
    }
    double rhs = std::pow(global_index(f), s - 1) * f.dims[label];

    CheckReport rep;
    rep.name = "fusion-identity";
    rep.tol = tol;
    rep.residual = std::abs(lhs - rhs);
    std::ostringstream os;
    os << "label=" << f.labels[label] << " lhs=" << lhs << " rhs=" << rhs;
    rep.detail = os.str();
    return rep;
}

// ---------------------------------------------------------------------------
// built-in rings

FusionRing trivial_ring() {
    FusionRing f;
    f.name = "trivial";
    f.labels = {"1"};
    f.unit = 0;
    f.dims = {1.0};
    f.n = {1};
    return f;
}

FusionRing group_ring(const GroupData& g) {
    FusionRing f;
    f.name = g.name;
    f.labels = g.elements;
    f.unit = g.identity();
    int l = g.order();
    f.dims.assign(l, 1.0);
    f.n.assign(static_cast<size_t>(l) * l * l, 0);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) f.fusion_ref(i, j, g.table[i][j]) = 1;
    return f;
}

FusionRing cyclic_ring(int n) { return group_ring(cyclic_group(n)); }

FusionRing s3_ring() { return group_ring(symmetric_group_3()); }

FusionRing fibonacci_ring() {
    FusionRing f;
    f.name = "fib";
    f.labels = {"1", "t"};
    f.unit = 0;
    f.dims = {1.0, (1.0 + std::sqrt(5.0)) / 2.0};
    f.n.assign(8, 0);
    f.fusion_ref(0, 0, 0) = 1;
    f.fusion_ref(0, 1, 1) = 1;
    f.fusion_ref(1, 0, 1) = 1;
    f.fusion_ref(1, 1, 0) = 1;
    f.fusion_ref(1, 1, 1) = 1;
    return f;
}

FusionRing su2_even_ring(int k) {
    if (k < 2) throw std::invalid_argument("su2_even_ring: k >= 2");
    FusionRing f;
    f.name = "su2e" + std::to_string(k);
    std::vector<int> lv;
    for (int a = 0; a <= k; a += 2) lv.push_back(a);
    int l = static_cast<int>(lv.size());
    for (int a : lv) f.labels.push_back(std::to_string(a));
    f.unit = 0;
    double q = std::numbers::pi / (k + 2);
    for (int a : lv) f.dims.push_back(std::sin((a + 1) * q) / std::sin(q));
    f.n.assign(static_cast<size_t>(l) * l * l, 0);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            for (int m = 0; m < l; ++m) {
                int a = lv[i], b = lv[j], c = lv[m];
                if (c >= std::abs(a - b) && c <= std::min(a + b, 2 * k - a - b) &&
                    (a + b + c) % 2 == 0)
                    f.fusion_ref(i, j, m) = 1;
            }
    return f;
}

std::optional<FusionRing> builtin_fusion(const std::string& name) {
    if (name == "trivial") return trivial_ring();
    if (name == "S3") return s3_ring();
    if (name == "fib") return fibonacci_ring();
    if (name.size() > 1 && name[0] == 'Z') {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 1 && n <= 64) return cyclic_ring(n);
    }
    if (name.rfind("su2e", 0) == 0) {
        int k = std::atoi(name.c_str() + 4);
        if (k >= 2 && k <= 64) return su2_even_ring(k);
    }
    return std::nullopt;
}

std::optional<ConnectionSquare> builtin_connection(const std::string& name) {
    if (name == "S3") return build_group_connection(symmetric_group_3());
    if (name.size() > 1 && name[0] == 'A') {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 2 && n <= 26) return build_dynkin_connection(n);
    }
    if (name.size() > 1 && name[0] == 'Z') {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 1 && n <= 24) return build_group_connection(cyclic_group(n));
    }
    return std::nullopt;
}

}  // namespace paragroup
