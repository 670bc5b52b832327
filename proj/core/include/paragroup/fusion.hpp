#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "paragroup/connection.hpp"
#include "paragroup/report.hpp"

namespace paragroup {

/// Fusion ring: labels with positive dimensions and non-negative integer
/// structure constants n[i][j][k] = N_{ij}^k.
struct FusionRing {
    std::string name;
    std::vector<std::string> labels;
    int unit = 0;
    std::vector<double> dims;
    std::vector<int> n;  // flattened (i * L + j) * L + k

    int label_count() const { return static_cast<int>(labels.size()); }
    int fusion(int i, int j, int k) const {
        int l = label_count();
        return n[(static_cast<size_t>(i) * l + j) * l + k];
    }
    int& fusion_ref(int i, int j, int k) {
        int l = label_count();
        return n[(static_cast<size_t>(i) * l + j) * l + k];
    }
    int label_index(const std::string& s) const;
};

/// Unit law, associativity, positivity, and the dimension homomorphism
/// sum_k N_{ij}^k mu_k = mu_i mu_j (within tol).
CheckReport validate_fusion(const FusionRing& f, double tol = 1e-9);

/// omega = sum_k mu_k^2.
double global_index(const FusionRing& f);

/// N_{X_0,...,X_{s-1}}^Y for all Y, by left-to-right contraction.
std::vector<long> multi_fusion(const FusionRing& f, const std::vector<int>& tuple);

/// Bipartite multiplicity graph between s-tuples and single labels.
struct BratteliDiagram {
    int s = 1;
    std::vector<std::vector<int>> tuples;
    int label_count = 0;
    Eigen::MatrixXd mult;  // tuples x labels
};

BratteliDiagram build_bratteli(const FusionRing& f, int s, std::size_t cap = (1u << 20));

struct PfReport {
    double beta_l = 0.0;       // top singular value of the multiplicity matrix
    double expected = 0.0;     // omega^{(s-1)/2}
    double sv_residual = 0.0;  // |beta_l - expected|
    double eigen_residual = 0.0;
    bool irreducible = false;  // unit tuple meets the unit label once

    CheckReport report(double tol) const;
};

/// beta_L = omega^{(s-1)/2} and the product weights
/// mu_L(tuple) = prod mu(i_t), mu_L(j) = beta_L mu(j) solve the bipartite
/// eigen equations of the diagram.
PfReport check_pf(const BratteliDiagram& l, const FusionRing& f, int s, double tol);

/// Index of the multiple inclusion: omega^{s-1}.
double index_report(const FusionRing& f, int s);

/// | sum_tuples N_tuple^Y mu_1...mu_s - omega^{s-1} mu_Y |.
CheckReport fusion_identity_check(const FusionRing& f, int s, int label, double tol,
                                  std::size_t cap = (1u << 20));

FusionRing trivial_ring();
FusionRing group_ring(const GroupData& g);  // labels = elements, dims = 1
FusionRing cyclic_ring(int n);
FusionRing s3_ring();
FusionRing fibonacci_ring();
FusionRing su2_even_ring(int k);  // even labels of the level-k SU(2) ring

/// trivial, Z<n>, S3, fib, su2e<k>; nullopt for unknown names.
std::optional<FusionRing> builtin_fusion(const std::string& name);

/// A2..A26 (Dynkin), Z<n>, S3; nullopt for unknown names.
std::optional<ConnectionSquare> builtin_connection(const std::string& name);

}  // namespace paragroup
