#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "idg/matrix.hpp"

namespace idg {

// Side information about inhibitor-defective associations. Under WSI the
// maximum in-degree of a defective (I_max) is known; under NSI nothing is
// known beyond the trivial cap r, and every formula substitutes I_max := r.
struct SideInfo {
    enum class Model { nsi, wsi };

    Model model = Model::nsi;
    int i_max = 0;  // meaningful only under WSI

    static SideInfo nsi() { return {Model::nsi, 0}; }
    static SideInfo wsi(int i_max) { return {Model::wsi, i_max}; }

    bool is_wsi() const noexcept { return model == Model::wsi; }

    // I_max with the NSI substitution applied.
    int effective_i_max(int r) const noexcept { return is_wsi() ? i_max : r; }

    // Throws if no association graph on (r, d) can satisfy this side info.
    void validate(int r, int d) const;

    bool operator==(const SideInfo&) const = default;
};

using TestPool = std::vector<int>;

// Ground truth: item universe 0..n-1 split into inhibitors, defectives and
// normal items, plus the directed inhibitor->defective association edges.
// Immutable after construction; all member vectors are kept sorted.
class AssociationGraph {
public:
    AssociationGraph(int n, std::vector<int> inhibitors, std::vector<int> defectives,
                     std::vector<std::pair<int, int>> edges);

    int n() const noexcept { return n_; }
    int num_inhibitors() const noexcept { return static_cast<int>(inhibitors_.size()); }
    int num_defectives() const noexcept { return static_cast<int>(defectives_.size()); }

    const std::vector<int>& inhibitors() const noexcept { return inhibitors_; }
    const std::vector<int>& defectives() const noexcept { return defectives_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

    bool is_inhibitor(int item) const;
    bool is_defective(int item) const;

    // Inhibitors associated with the given defective, sorted ascending.
    const std::vector<int>& inhibitors_of(int defective) const;

    bool operator==(const AssociationGraph& other) const {
        return n_ == other.n_ && inhibitors_ == other.inhibitors_ &&
               defectives_ == other.defectives_ && edges_ == other.edges_;
    }

private:
    int n_;
    std::vector<int> inhibitors_;
    std::vector<int> defectives_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> inhibitors_of_;  // parallel to defectives_
};

// A test is positive iff it contains at least one defective none of whose
// associated inhibitors is also in the test.
int outcome(const AssociationGraph& graph, std::span<const int> pool);

// Component l is the outcome of the pool given by row l of the matrix.
std::vector<std::uint8_t> outcome_vector(const AssociationGraph& graph, const PoolingMatrix& matrix);

// As above for the pool (row of matrix) augmented with one extra item; used
// by the second stage of the adaptive design, which tests each stage-2 pool
// together with one declared defective. column_of maps item id -> matrix
// column, -1 for items not covered by the matrix.
int outcome_with_extra(const AssociationGraph& graph, const PoolingMatrix& matrix, int row,
                       std::span<const int> column_of, int extra_item);

// Uniform random instance: (I, D) uniform over disjoint (r, d)-subsets of
// 0..n-1, association pattern uniform over all patterns with inhibitor
// out-degree >= 1 (and defective in-degree <= I_max under WSI, enforced by
// whole-pattern rejection so the accepted law is exactly uniform).
AssociationGraph sample_graph(int n, int r, int d, const SideInfo& side, std::uint64_t seed);

}  // namespace idg
