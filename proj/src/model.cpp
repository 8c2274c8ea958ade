#include "idg/model.hpp"

#include <algorithm>
#include <string>

#include "idg/error.hpp"
#include "idg/rng.hpp"

namespace idg {

namespace {

bool sorted_unique(const std::vector<int>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

bool contains(const std::vector<int>& sorted, int item) {
    return std::binary_search(sorted.begin(), sorted.end(), item);
}

}  // namespace

void SideInfo::validate(int r, int d) const {
    if (r < 0 || d < 0) fail(ErrorKind::invalid_input, "r and d must be nonnegative");
    if (r >= 1 && d == 0)
        fail(ErrorKind::infeasible, "every inhibitor needs an associated defective, but d = 0");
    if (is_wsi()) {
        if (i_max < 1) fail(ErrorKind::invalid_input, "I_max must be >= 1 under WSI");
        if (i_max > r)
            fail(ErrorKind::infeasible,
                 "I_max = " + std::to_string(i_max) + " exceeds r = " + std::to_string(r));
        // r edges at minimum must fit under the in-degree cap
        if (static_cast<long long>(i_max) * d < r)
            fail(ErrorKind::infeasible, "I_max = " + std::to_string(i_max) +
                                            " is not feasible for (r, d) = (" + std::to_string(r) +
                                            ", " + std::to_string(d) + ")");
    }
}

AssociationGraph::AssociationGraph(int n, std::vector<int> inhibitors, std::vector<int> defectives,
                                   std::vector<std::pair<int, int>> edges)
    : n_(n),
      inhibitors_(std::move(inhibitors)),
      defectives_(std::move(defectives)),
      edges_(std::move(edges)) {
    std::sort(inhibitors_.begin(), inhibitors_.end());
    std::sort(defectives_.begin(), defectives_.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    if (n_ < 0) fail(ErrorKind::invalid_input, "n must be nonnegative");
    if (!sorted_unique(inhibitors_)) fail(ErrorKind::invalid_input, "duplicate inhibitor indices");
    if (!sorted_unique(defectives_)) fail(ErrorKind::invalid_input, "duplicate defective indices");
    for (int w : inhibitors_)
        if (w < 0 || w >= n_) fail(ErrorKind::invalid_input, "inhibitor index out of range");
    for (int w : defectives_)
        if (w < 0 || w >= n_) fail(ErrorKind::invalid_input, "defective index out of range");
    if (static_cast<int>(inhibitors_.size() + defectives_.size()) > n_)
        fail(ErrorKind::invalid_input, "r + d exceeds n");
    for (int w : inhibitors_)
        if (contains(defectives_, w))
            fail(ErrorKind::invalid_input, "inhibitor and defective sets must be disjoint");

    inhibitors_of_.assign(defectives_.size(), {});
    std::vector<int> out_degree(inhibitors_.size(), 0);
    for (const auto& [s, u] : edges_) {
        const auto si = std::lower_bound(inhibitors_.begin(), inhibitors_.end(), s);
        if (si == inhibitors_.end() || *si != s)
            fail(ErrorKind::invalid_input, "edge source is not an inhibitor");
        const auto ui = std::lower_bound(defectives_.begin(), defectives_.end(), u);
        if (ui == defectives_.end() || *ui != u)
            fail(ErrorKind::invalid_input, "edge target is not a defective");
        ++out_degree[si - inhibitors_.begin()];
        inhibitors_of_[ui - defectives_.begin()].push_back(s);
    }
    for (std::size_t i = 0; i < out_degree.size(); ++i)
        if (out_degree[i] == 0)
            fail(ErrorKind::invalid_input,
                 "inhibitor " + std::to_string(inhibitors_[i]) + " has no associated defective");
}

bool AssociationGraph::is_inhibitor(int item) const { return contains(inhibitors_, item); }

bool AssociationGraph::is_defective(int item) const { return contains(defectives_, item); }

const std::vector<int>& AssociationGraph::inhibitors_of(int defective) const {
    const auto it = std::lower_bound(defectives_.begin(), defectives_.end(), defective);
    if (it == defectives_.end() || *it != defective)
        fail(ErrorKind::invalid_input, "item " + std::to_string(defective) + " is not a defective");
    return inhibitors_of_[it - defectives_.begin()];
}

int outcome(const AssociationGraph& graph, std::span<const int> pool) {
    std::vector<std::uint8_t> present(static_cast<std::size_t>(graph.n()), 0);
    for (int item : pool) {
        if (item < 0 || item >= graph.n())
            fail(ErrorKind::invalid_input, "pool item " + std::to_string(item) + " out of range");
        present[item] = 1;
    }
    const auto& defectives = graph.defectives();
    for (std::size_t k = 0; k < defectives.size(); ++k) {
        if (!present[defectives[k]]) continue;
        bool inhibited = false;
        for (int s : graph.inhibitors_of(defectives[k]))
            if (present[s]) {
                inhibited = true;
                break;
            }
        if (!inhibited) return 1;
    }
    return 0;
}

std::vector<std::uint8_t> outcome_vector(const AssociationGraph& graph, const PoolingMatrix& matrix) {
    if (matrix.cols() != graph.n())
        fail(ErrorKind::invalid_input, "matrix has " + std::to_string(matrix.cols()) +
                                           " columns but the graph has " + std::to_string(graph.n()) +
                                           " items");
    std::vector<std::uint8_t> y(static_cast<std::size_t>(matrix.rows()), 0);
    const auto& defectives = graph.defectives();
    for (int l = 0; l < matrix.rows(); ++l) {
        for (std::size_t k = 0; k < defectives.size(); ++k) {
            if (!matrix.at(l, defectives[k])) continue;
            bool inhibited = false;
            for (int s : graph.inhibitors_of(defectives[k]))
                if (matrix.at(l, s)) {
                    inhibited = true;
                    break;
                }
            if (!inhibited) {
                y[l] = 1;
                break;
            }
        }
    }
    return y;
}

int outcome_with_extra(const AssociationGraph& graph, const PoolingMatrix& matrix, int row,
                       std::span<const int> column_of, int extra_item) {
    if (static_cast<int>(column_of.size()) != graph.n())
        fail(ErrorKind::invalid_input, "column map must cover every item");
    const auto in_pool = [&](int item) {
        if (item == extra_item) return true;
        const int c = column_of[item];
        return c >= 0 && matrix.at(row, c) != 0;
    };
    const auto& defectives = graph.defectives();
    for (int u : defectives) {
        if (!in_pool(u)) continue;
        bool inhibited = false;
        for (int s : graph.inhibitors_of(u))
            if (in_pool(s)) {
                inhibited = true;
                break;
            }
        if (!inhibited) return 1;
    }
    return 0;
}

AssociationGraph sample_graph(int n, int r, int d, const SideInfo& side, std::uint64_t seed) {
    if (n < 0 || r < 0 || d < 0) fail(ErrorKind::invalid_input, "n, r, d must be nonnegative");
    if (r + d > n) fail(ErrorKind::infeasible, "r + d exceeds n");
    side.validate(r, d);
    if (d > 62) fail(ErrorKind::capacity_exceeded, "edge-pattern sampling supports d <= 62");

    Rng rng(seed);

    std::vector<int> items(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) items[i] = i;
    rng.shuffle_prefix(items, static_cast<std::size_t>(r + d));
    std::vector<int> inhibitors(items.begin(), items.begin() + r);
    std::vector<int> defectives(items.begin() + r, items.begin() + r + d);
    std::sort(inhibitors.begin(), inhibitors.end());
    std::sort(defectives.begin(), defectives.end());

    const int cap = side.effective_i_max(r);
    const std::uint64_t num_nonempty = (d > 0) ? ((1ULL << d) - 1) : 0;

    std::vector<std::uint64_t> targets(static_cast<std::size_t>(r), 0);
    std::vector<int> in_degree(static_cast<std::size_t>(d), 0);
    bool accepted = (r == 0);
    while (!accepted) {
        std::fill(in_degree.begin(), in_degree.end(), 0);
        accepted = true;
        for (int i = 0; i < r; ++i) {
            targets[i] = 1 + rng.uniform_below(num_nonempty);
            for (int j = 0; j < d; ++j)
                if (targets[i] >> j & 1) ++in_degree[j];
        }
        for (int j = 0; j < d; ++j)
            if (in_degree[j] > cap) {
                accepted = false;
                break;
            }
    }

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < d; ++j)
            if (targets[i] >> j & 1) edges.emplace_back(inhibitors[i], defectives[j]);

    return AssociationGraph(n, std::move(inhibitors), std::move(defectives), std::move(edges));
}

}  // namespace idg
