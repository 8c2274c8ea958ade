#pragma once

#include <optional>

#include "idg/model.hpp"

namespace idg {

enum class StatKind { q1_exact, q1_lb, q2_exact, q2_ub, q3_exact };

const char* to_string(StatKind kind);

struct ConditionalStat {
    double value = 0.0;
    StatKind kind = StatKind::q1_exact;
};

// Probability that a test is positive given that conditioned_item is in it,
// with every other inhibitor/defective present independently with
// probability p. Exact kinds enumerate all presence patterns of the r + d
// special items (capped at r + d <= 20); q1_lb and q2_ub evaluate the
// closed-form bounds (1-p)^|I(u)| and 1-(1-p)^d.
ConditionalStat conditional_stat(const AssociationGraph& graph, double p, int conditioned_item,
                                 StatKind kind);

// ceil(log2(#realizations of (I, D, E))): the number of binary outcomes must
// be able to index every instance the decoder is required to distinguish.
// NSI pattern count is (2^d - 1)^r; WSI counts patterns with in-degree
// <= I_max exactly (inclusion-exclusion over isolated inhibitors, capped at
// r * d <= 64). Exact integer arithmetic throughout.
long long counting_lower_bound(int n, int r, int d, const SideInfo& side);

// Order-only reference values with unit constants; never comparable against
// designed test counts as if the constants were real.
struct AsymptoticTerms {
    double entropy_term = 0.0;                    // (r+d) log2 n + rd  (I_max d under WSI)
    std::optional<double> inhibitor_term;         // i^2 / log2 i * log2 n, needs i >= 2
    std::optional<double> defective_term;         // d^2, under WSI only when attainable
};

struct BoundReport {
    int n = 0;
    int r = 0;
    int d = 0;
    SideInfo side;
    std::optional<long long> counting_lb;  // absent when past the exact-count cap
    AsymptoticTerms terms;
};

BoundReport asymptotic_reference(int n, int r, int d, const SideInfo& side);

}  // namespace idg
