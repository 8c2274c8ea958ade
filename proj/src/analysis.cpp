#include "idg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

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

long long ceil_log2(const cpp_int& x) {
    if (x <= 1) return 0;
    const cpp_int m = x - 1;
    return static_cast<long long>(boost::multiprecision::msb(m)) + 1;
}

// # association patterns on (r, d) with inhibitor out-degree >= 1 and
// defective in-degree <= cap. Inclusion-exclusion over the inhibitors left
// isolated; with k removed, each defective independently picks at most cap
// in-neighbours among the remaining r - k.
cpp_int pattern_count(int r, int d, int cap) {
    if (r == 0) return 1;
    cpp_int total = 0;
    for (int k = 0; k <= r; ++k) {
        const int m = r - k;
        cpp_int choices = 0;
        for (int i = 0; i <= std::min(cap, m); ++i) choices += binomial(m, i);
        cpp_int per_defective = 1;
        for (int j = 0; j < d; ++j) per_defective *= choices;
        const cpp_int term = binomial(r, k) * per_defective;
        total += (k % 2 == 0) ? term : -term;
    }
    return total;
}

enum class Role { inhibitor, defective, normal };

Role role_of(const AssociationGraph& graph, int item) {
    if (item < 0 || item >= graph.n())
        fail(ErrorKind::invalid_input, "conditioned item out of range");
    if (graph.is_inhibitor(item)) return Role::inhibitor;
    if (graph.is_defective(item)) return Role::defective;
    return Role::normal;
}

// Enumerates presence patterns of all inhibitors and defectives, with one of
// them optionally forced present, and sums the probability of the patterns
// that yield a positive outcome.
double exact_conditional(const AssociationGraph& graph, double p, int forced_item) {
    const int r = graph.num_inhibitors();
    const int d = graph.num_defectives();
    const int m = r + d;
    if (m > 20)
        fail(ErrorKind::capacity_exceeded, "exact statistics support r + d <= 20");
    if (m == 0) return 0.0;

    int forced_bit = -1;
    std::vector<std::uint32_t> inhibitor_mask_of(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < r; ++i)
        if (graph.inhibitors()[i] == forced_item) forced_bit = i;
    for (int j = 0; j < d; ++j) {
        if (graph.defectives()[j] == forced_item) forced_bit = r + j;
        for (int s : graph.inhibitors_of(graph.defectives()[j])) {
            const auto it = std::lower_bound(graph.inhibitors().begin(), graph.inhibitors().end(), s);
            inhibitor_mask_of[j] |= 1u << (it - graph.inhibitors().begin());
        }
    }

    std::vector<double> pow_p(m + 1, 1.0), pow_q(m + 1, 1.0);
    for (int i = 1; i <= m; ++i) {
        pow_p[i] = pow_p[i - 1] * p;
        pow_q[i] = pow_q[i - 1] * (1.0 - p);
    }

    const int free_count = (forced_bit >= 0) ? m - 1 : m;
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (forced_bit >= 0 && !(mask >> forced_bit & 1)) continue;
        bool positive = false;
        for (int j = 0; j < d; ++j) {
            if (!(mask >> (r + j) & 1)) continue;
            if ((mask & inhibitor_mask_of[j]) == 0) {
                positive = true;
                break;
            }
        }
        if (!positive) continue;
        int present = static_cast<int>(std::popcount(mask));
        if (forced_bit >= 0) --present;  // the conditioned item has probability one
        sum += pow_p[present] * pow_q[free_count - present];
    }
    return sum;
}

}  // namespace

const char* to_string(StatKind kind) {
    switch (kind) {
        case StatKind::q1_exact: return "q1_exact";
        case StatKind::q1_lb: return "q1_lb";
        case StatKind::q2_exact: return "q2_exact";
        case StatKind::q2_ub: return "q2_ub";
        case StatKind::q3_exact: return "q3_exact";
    }
    return "unknown";
}

ConditionalStat conditional_stat(const AssociationGraph& graph, double p, int conditioned_item,
                                 StatKind kind) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invalid_input, "p must lie in [0, 1]");
    const Role role = role_of(graph, conditioned_item);

    switch (kind) {
        case StatKind::q1_exact:
        case StatKind::q1_lb:
            if (role != Role::defective)
                fail(ErrorKind::invalid_input, "q1 conditions on a defective");
            break;
        case StatKind::q2_exact:
        case StatKind::q2_ub:
            if (role != Role::normal)
                fail(ErrorKind::invalid_input, "q2 conditions on a normal item");
            break;
        case StatKind::q3_exact:
            if (role != Role::inhibitor)
                fail(ErrorKind::invalid_input, "q3 conditions on an inhibitor");
            break;
    }

    ConditionalStat stat;
    stat.kind = kind;
    switch (kind) {
        case StatKind::q1_lb:
            stat.value = std::pow(1.0 - p,
                                  static_cast<double>(graph.inhibitors_of(conditioned_item).size()));
            break;
        case StatKind::q2_ub:
            stat.value = 1.0 - std::pow(1.0 - p, static_cast<double>(graph.num_defectives()));
            break;
        case StatKind::q2_exact:
            // a normal item never changes an outcome, so conditioning on its
            // presence leaves the unconditional positive probability
            stat.value = exact_conditional(graph, p, -1);
            break;
        default:
            stat.value = exact_conditional(graph, p, conditioned_item);
            break;
    }
    return stat;
}

long long counting_lower_bound(int n, int r, int d, const SideInfo& side) {
    if (n < 0 || r < 0 || d < 0) fail(ErrorKind::invalid_input, "n, r, d must be nonnegative");
    if (r + d > n) fail(ErrorKind::infeasible, "r + d exceeds n");
    side.validate(r, d);
    if (side.is_wsi() && static_cast<long long>(r) * d > 64)
        fail(ErrorKind::capacity_exceeded, "WSI pattern counting supports r * d <= 64");

    const int cap = side.effective_i_max(r);
    cpp_int realizations = binomial(n, d) * binomial(n - d, r);
    if (side.is_wsi()) {
        realizations *= pattern_count(r, d, cap);
    } else {
        const cpp_int per_inhibitor = (cpp_int(1) << d) - 1;
        for (int i = 0; i < r; ++i) realizations *= per_inhibitor;
    }
    return ceil_log2(realizations);
}

BoundReport asymptotic_reference(int n, int r, int d, const SideInfo& side) {
    if (n < 1 || r < 0 || d < 0) fail(ErrorKind::invalid_input, "need n >= 1 and r, d >= 0");
    if (r + d > n) fail(ErrorKind::infeasible, "r + d exceeds n");
    side.validate(r, d);

    const int i_eff = side.effective_i_max(r);
    const double log2_n = std::log2(static_cast<double>(n));

    BoundReport report;
    report.n = n;
    report.r = r;
    report.d = d;
    report.side = side;
    report.terms.entropy_term =
        (r + d) * log2_n + static_cast<double>(i_eff) * d;
    if (i_eff >= 2)
        report.terms.inhibitor_term =
            static_cast<double>(i_eff) * i_eff / std::log2(static_cast<double>(i_eff)) * log2_n;

    if (!side.is_wsi()) {
        report.terms.defective_term = static_cast<double>(d) * d;
    } else {
        // attainable only with slack in the in-degree budget: I_max above the
        // forced minimum ceil(r/d), or r strictly below I_max-saturating cd
        const int c_min = (r + d - 1) / d;  // ceil(r/d), d >= 1 given r >= 1
        if (d >= 1 && (side.i_max > c_min || r % d != 0))
            report.terms.defective_term = static_cast<double>(d) * d;
    }

    if (!side.is_wsi() || static_cast<long long>(r) * d <= 64)
        report.counting_lb = counting_lower_bound(n, r, d, side);
    return report;
}

}  // namespace idg
