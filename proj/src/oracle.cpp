#include "idg/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "idg/error.hpp"

namespace idg {

namespace {

using boost::multiprecision::cpp_int;

cpp_int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    cpp_int result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

bool next_combination(std::vector<int>& idx, int limit) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < limit - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

bool lex_less(const AssociationGraph& a, const AssociationGraph& b) {
    if (a.defectives() != b.defectives()) return a.defectives() < b.defectives();
    if (a.inhibitors() != b.inhibitors()) return a.inhibitors() < b.inhibitors();
    return a.edges() < b.edges();
}

}  // namespace

bool ConsistencySet::contains(const AssociationGraph& graph) const {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const AssociationGraph& g) { return g == graph; });
}

ConsistencySet enumerate_consistent(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                                    int n, int r, int d, const SideInfo& side) {
    if (matrix.cols() != n) fail(ErrorKind::invalid_input, "matrix width does not match n");
    if (static_cast<int>(y.size()) != matrix.rows())
        fail(ErrorKind::invalid_input, "outcome vector length does not match test count");
    if (r < 0 || d < 0 || r + d > n) fail(ErrorKind::infeasible, "invalid (n, r, d)");
    side.validate(r, d);
    if (d > 30) fail(ErrorKind::capacity_exceeded, "hypothesis enumeration supports d <= 30");

    cpp_int budget = binomial(n, d) * binomial(n - d, r);
    if (r > 0) {
        const cpp_int patterns = (cpp_int(1) << d) - 1;
        for (int i = 0; i < r; ++i) budget *= patterns;
    }
    if (budget > 10'000'000)
        fail(ErrorKind::capacity_exceeded,
             "hypothesis space has " + budget.str() + " members, budget is 1e7");

    const int t = matrix.rows();
    const int cap = side.effective_i_max(r);
    const std::uint32_t full = (d > 0) ? ((1u << d) - 1) : 0;

    ConsistencySet set;

    std::vector<int> def_idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) def_idx[i] = i;

    std::vector<int> defectives(static_cast<std::size_t>(d));
    std::vector<int> rest, inhibitors(static_cast<std::size_t>(r));
    std::vector<std::uint32_t> targets(static_cast<std::size_t>(r));
    std::vector<int> in_degree(static_cast<std::size_t>(d));

    // Checks hypothesis outcomes row by row with early exit; graphs are only
    // materialized for survivors.
    const auto consistent = [&]() {
        for (int l = 0; l < t; ++l) {
            int positive = 0;
            for (int j = 0; j < d && !positive; ++j) {
                if (!matrix.at(l, defectives[j])) continue;
                bool inhibited = false;
                for (int i = 0; i < r; ++i) {
                    if ((targets[i] >> j & 1) && matrix.at(l, inhibitors[i])) {
                        inhibited = true;
                        break;
                    }
                }
                if (!inhibited) positive = 1;
            }
            if (positive != (y[l] ? 1 : 0)) return false;
        }
        return true;
    };

    const auto emit = [&]() {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < d; ++j)
                if (targets[i] >> j & 1) edges.emplace_back(inhibitors[i], defectives[j]);
        set.candidates.emplace_back(n, inhibitors, defectives, std::move(edges));
    };

    bool more_defectives = true;
    if (d == 0) def_idx.clear();
    while (more_defectives) {
        for (int i = 0; i < d; ++i) defectives[i] = def_idx[i];
        rest.clear();
        {
            int next = 0;
            for (int item = 0; item < n; ++item) {
                if (next < d && defectives[next] == item) {
                    ++next;
                    continue;
                }
                rest.push_back(item);
            }
        }

        std::vector<int> inh_idx(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) inh_idx[i] = i;
        bool more_inhibitors = true;
        while (more_inhibitors) {
            for (int i = 0; i < r; ++i) inhibitors[i] = rest[inh_idx[i]];

            if (r == 0) {
                if (consistent()) emit();
            } else {
                std::fill(targets.begin(), targets.end(), 1u);
                while (true) {
                    bool degree_ok = true;
                    if (side.is_wsi()) {
                        std::fill(in_degree.begin(), in_degree.end(), 0);
                        for (int i = 0; i < r && degree_ok; ++i)
                            for (int j = 0; j < d; ++j)
                                if ((targets[i] >> j & 1) && ++in_degree[j] > cap) {
                                    degree_ok = false;
                                    break;
                                }
                    }
                    if (degree_ok && consistent()) emit();

                    int digit = r - 1;
                    while (digit >= 0 && targets[digit] == full) {
                        targets[digit] = 1u;
                        --digit;
                    }
                    if (digit < 0) break;
                    ++targets[digit];
                }
            }
            more_inhibitors = (r > 0) && next_combination(inh_idx, n - d);
        }
        more_defectives = (d > 0) && next_combination(def_idx, n);
    }

    std::sort(set.candidates.begin(), set.candidates.end(), lex_less);
    return set;
}

double exact_error_probability(const AssociationGraph& graph, int t, double p,
                               double threshold_fraction) {
    if (t < 1) fail(ErrorKind::invalid_input, "need at least one test");
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invalid_input, "p must lie in [0, 1]");
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
        fail(ErrorKind::invalid_input, "threshold_fraction must lie strictly in (0, 1)");

    const int r = graph.num_inhibitors();
    const int d = graph.num_defectives();
    const int m = r + d;
    const long long n_normal = graph.n() - m;
    if (static_cast<long long>(t) * m > 24)
        fail(ErrorKind::capacity_exceeded, "exact pipeline analysis supports T * (r + d) <= 24");

    if (d == 0) {
        // no defective: y is all-zero, nothing is ever declared, and with
        // expected_d = 0 the empty declaration is the correct answer
        return 0.0;
    }

    const std::uint32_t row_full = (1u << t) - 1;

    // per-column weight table and binomial pmfs for the integrated-out columns
    std::vector<double> col_weight(1u << t);
    for (std::uint32_t mask = 0; mask <= row_full; ++mask) {
        const int ones = std::popcount(mask);
        col_weight[mask] = std::pow(p, ones) * std::pow(1.0 - p, t - ones);
    }
    std::vector<std::vector<double>> pmf(static_cast<std::size_t>(t) + 1);
    for (int size = 0; size <= t; ++size) {
        pmf[size].assign(static_cast<std::size_t>(size) + 1, 0.0);
        for (int c = 0; c <= size; ++c) {
            double v = 1.0;
            for (int i = 1; i <= c; ++i) v = v * (size - c + i) / i;
            pmf[size][c] = v * std::pow(p, c) * std::pow(1.0 - p, size - c);
        }
    }

    // inhibitor bit masks per defective, and edge truth table
    std::vector<std::uint32_t> assoc(static_cast<std::size_t>(d), 0);
    for (int j = 0; j < d; ++j)
        for (int s : graph.inhibitors_of(graph.defectives()[j])) {
            const auto it = std::lower_bound(graph.inhibitors().begin(), graph.inhibitors().end(), s);
            assoc[j] |= 1u << (it - graph.inhibitors().begin());
        }

    const auto declared = [&](int tests, int positives) {
        return tests > 0 && positives > tests * threshold_fraction;
    };

    // probability that one normal item's column is decoded as normal, given
    // the sizes of the exclusive positive pools, the other positive rows and
    // the negative rows; keyed by that shape since columns are exchangeable
    std::map<std::vector<int>, double> ok_cache;
    const auto normal_ok = [&](std::vector<int> shape) {
        auto found = ok_cache.find(shape);
        if (found != ok_cache.end()) return found->second;
        const int pp = shape[static_cast<std::size_t>(d)];
        const int nn = shape[static_cast<std::size_t>(d) + 1];

        // untested columns decode as normal outright
        double total = std::pow(1.0 - p, t);

        std::vector<int> appear(static_cast<std::size_t>(d), 1);
        const auto column_ok = [&](double weight_pools, int in_pools) {
            for (int a = 0; a <= pp; ++a)
                for (int b = 0; b <= nn; ++b) {
                    const int tests = in_pools + a + b;
                    const int positives = in_pools + a;
                    if (!declared(tests, positives))
                        total += weight_pools * pmf[pp][a] * pmf[nn][b];
                }
        };
        // every exclusive pool set must be hit at least once
        const auto recurse = [&](auto&& self, int k, double weight, int in_pools) -> void {
            if (k == d) {
                column_ok(weight, in_pools);
                return;
            }
            const int mk = shape[static_cast<std::size_t>(k)];
            for (int a = 1; a <= mk; ++a) self(self, k + 1, weight * pmf[mk][a], in_pools + a);
        };
        recurse(recurse, 0, 1.0, 0);
        ok_cache.emplace(std::move(shape), total);
        return total;
    };

    const std::uint64_t restrictions = 1ULL << (t * m);
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(m));
    double success = 0.0;

    for (std::uint64_t code = 0; code < restrictions; ++code) {
        double weight = 1.0;
        for (int i = 0; i < m; ++i) {
            cols[i] = static_cast<std::uint32_t>(code >> (t * i)) & row_full;
            weight *= col_weight[cols[i]];
        }
        if (weight == 0.0) continue;

        std::uint32_t y_mask = 0;
        for (int j = 0; j < d; ++j) {
            std::uint32_t inh = 0;
            for (int i = 0; i < r; ++i)
                if (assoc[j] >> i & 1) inh |= cols[i];
            y_mask |= cols[r + j] & ~inh;
        }

        bool ok = true;
        for (int i = 0; i < r && ok; ++i) {
            const int tests = std::popcount(cols[i]);
            const int positives = std::popcount(cols[i] & y_mask);
            if (declared(tests, positives)) ok = false;
        }
        for (int j = 0; j < d && ok; ++j) {
            const int tests = std::popcount(cols[r + j]);
            const int positives = std::popcount(cols[r + j] & y_mask);
            if (!declared(tests, positives)) ok = false;
        }
        if (!ok) continue;

        // exclusive positive pools per defective
        std::vector<std::uint32_t> pools(static_cast<std::size_t>(d));
        std::uint32_t pool_union = 0;
        for (int j = 0; j < d && ok; ++j) {
            std::uint32_t others = 0;
            for (int jj = 0; jj < d; ++jj)
                if (jj != j) others |= cols[r + jj];
            pools[j] = cols[r + j] & ~others & y_mask;
            if (pools[j] == 0) ok = false;
            pool_union |= pools[j];
        }
        if (!ok) continue;

        // each inhibitor must be seen somewhere yet stay out of exactly the
        // pools of the defectives it inhibits
        for (int i = 0; i < r && ok; ++i) {
            if (cols[i] == 0) {
                ok = false;  // untested inhibitors decode as normal
                break;
            }
            for (int j = 0; j < d; ++j) {
                const bool declared_assoc = (cols[i] & pools[j]) == 0;
                const bool true_assoc = (assoc[j] >> i & 1) != 0;
                if (declared_assoc != true_assoc) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;

        double contribution = weight;
        if (n_normal > 0) {
            std::vector<int> shape(static_cast<std::size_t>(d) + 2);
            for (int j = 0; j < d; ++j) shape[j] = std::popcount(pools[j]);
            std::sort(shape.begin(), shape.begin() + d);
            shape[static_cast<std::size_t>(d)] = std::popcount(y_mask & ~pool_union);
            shape[static_cast<std::size_t>(d) + 1] = t - std::popcount(y_mask);
            contribution *= std::pow(normal_ok(std::move(shape)), static_cast<double>(n_normal));
        }
        success += contribution;
    }
    return 1.0 - success;
}

}  // namespace idg
