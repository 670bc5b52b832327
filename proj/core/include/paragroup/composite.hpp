#pragma once

#include "paragroup/connection.hpp"
#include "paragroup/report.hpp"

namespace paragroup {

enum class Direction { horizontal, vertical };

/// Glue two connection squares along a shared side (right of `a` = left of
/// `b` for horizontal, top of `a` = bottom of `b` for vertical). Composite
/// cell values sum the products of the two cell values over the shared
/// internal edge; composite side graphs are edge-pair concatenations.
ConnectionSquare compose(const ConnectionSquare& a, const ConnectionSquare& b, Direction dir);

/// Composite connection on K = G.G^t: the 2x2 block square
/// [W2 W3; W W1] of the connection with its renormalizations. Requires
/// bottom == left (so all four sides of the result are the same K).
ConnectionSquare build_y(const ConnectionSquare& w);

/// Max cell-wise deviation |renormalize(Y,m) - Y| over all three modes,
/// identifying transposed K-sides by reversing the edge pairs "a|b" -> "b|a".
CheckReport check_renorm_invariance(const ConnectionSquare& y, double tol);

}  // namespace paragroup
