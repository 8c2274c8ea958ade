#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idg/matrix.hpp"
#include "idg/model.hpp"

namespace idg {

// All hypotheses (I, D, E) on known (n, r, d, side) whose outcome vector
// under the given matrix equals y. The generating graph is always a member.
struct ConsistencySet {
    std::vector<AssociationGraph> candidates;  // canonical lexicographic order

    bool contains(const AssociationGraph& graph) const;
};

// Exhaustive enumeration; budget C(n,d) * C(n-d,r) * (2^d-1)^r <= 1e7.
ConsistencySet enumerate_consistent(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                                    int n, int r, int d, const SideInfo& side);

// Exact probability, over a T x n i.i.d. Bernoulli(p) matrix, that the
// non-adaptive pipeline fails to return exactly the given graph. Enumerates
// the matrix restriction to the inhibitor/defective columns (every other
// column integrates out analytically); budget T * (r + d) <= 24.
double exact_error_probability(const AssociationGraph& graph, int t, double p,
                               double threshold_fraction);

}  // namespace idg
