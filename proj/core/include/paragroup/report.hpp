#pragma once

#include <string>

namespace paragroup {

/// Outcome of a numerical check: a residual compared against a tolerance.
/// Structural problems (wrong block shapes, missing data) are reported through
/// `structural_ok` + `detail` instead of exceptions.
struct CheckReport {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool structural_ok = true;
    std::string detail;

    bool pass() const { return structural_ok && residual <= tol; }
};

}  // namespace paragroup
