#pragma once

#include <string>
#include <vector>

#include "paragroup/graph.hpp"

namespace paragroup::detail {

/// Edge endpoints of the four side graphs resolved into the shared corner
/// classes V0..V3 (V0 indexed by bottom.even order, V1 by bottom.odd,
/// V2 by left.odd, V3 by right.odd).
struct SquareIndex {
    std::vector<int> b_src, b_dst, l_src, l_dst, r_src, r_dst, t_src, t_dst;
    // incidence lists keyed by the source-class corner index
    std::vector<std::vector<int>> b_from, l_from, r_from, t_from;
    // and by the destination-class corner index
    std::vector<std::vector<int>> b_to, l_to, r_to, t_to;
    int n0 = 0, n1 = 0, n2 = 0, n3 = 0;

    static SquareIndex build(const BipartiteGraph& bottom, const BipartiteGraph& left,
                             const BipartiteGraph& right, const BipartiteGraph& top);
};

}  // namespace paragroup::detail
