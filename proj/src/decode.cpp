#include "idg/decode.hpp"

#include <algorithm>
#include <string>

#include "idg/error.hpp"

namespace idg {

namespace {

// Turns per-item "non-associated with declared defective k" marks into the
// final classification. An item associated with at least one declared
// defective is an inhibitor; one non-associated with all of them is normal.
// Items that never entered any test carry no information and are left normal.
DecodeResult assemble(const std::vector<int>& declared_defectives,
                      const std::vector<int>& candidate_items,
                      const std::vector<std::vector<std::uint8_t>>& non_associated,
                      const std::vector<std::uint8_t>& observed) {
    DecodeResult result;
    result.defectives = declared_defectives;
    const std::size_t d_hat = declared_defectives.size();
    for (std::size_t idx = 0; idx < candidate_items.size(); ++idx) {
        if (!observed[idx]) continue;
        bool any_edge = false;
        for (std::size_t k = 0; k < d_hat; ++k) {
            if (!non_associated[k][idx]) {
                result.edges.emplace_back(candidate_items[idx], declared_defectives[k]);
                any_edge = true;
            }
        }
        if (any_edge) result.inhibitors.push_back(candidate_items[idx]);
    }
    std::sort(result.edges.begin(), result.edges.end());
    return result;
}

}  // namespace

const char* to_string(DecodeFailure::Kind kind) {
    switch (kind) {
        case DecodeFailure::Kind::wrong_defective_count: return "WrongDefectiveCount";
        case DecodeFailure::Kind::empty_pool_set: return "EmptyPoolSet";
        case DecodeFailure::Kind::empty_positive_set: return "EmptyPositiveSet";
    }
    return "unknown";
}

std::vector<ParticipationStats> participation(const PoolingMatrix& matrix,
                                              std::span<const std::uint8_t> y) {
    if (static_cast<int>(y.size()) != matrix.rows())
        fail(ErrorKind::invalid_input, "outcome vector length does not match test count");
    std::vector<ParticipationStats> stats(static_cast<std::size_t>(matrix.cols()));
    for (int l = 0; l < matrix.rows(); ++l) {
        const auto row = matrix.row(l);
        const bool positive = y[l] != 0;
        for (int j = 0; j < matrix.cols(); ++j) {
            if (!row[j]) continue;
            ++stats[j].tests_in;
            if (positive) ++stats[j].positives_in;
        }
    }
    return stats;
}

Step1Result step1_classify(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                           double threshold_fraction, int expected_d) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
        fail(ErrorKind::invalid_input, "threshold_fraction must lie strictly in (0, 1)");
    if (expected_d < 0) fail(ErrorKind::invalid_input, "expected_d must be nonnegative");

    const auto stats = participation(matrix, y);
    Step1Result result;
    for (int j = 0; j < matrix.cols(); ++j) {
        // untested items (tests_in == 0) never pass the strict comparison
        if (stats[j].positives_in > stats[j].tests_in * threshold_fraction)
            result.declared.push_back(j);
    }
    if (static_cast<int>(result.declared.size()) != expected_d)
        result.failure = DecodeFailure{DecodeFailure::Kind::wrong_defective_count,
                                       static_cast<int>(result.declared.size())};
    return result;
}

std::vector<std::vector<int>> exclusive_positive_pools(const PoolingMatrix& matrix,
                                                       std::span<const std::uint8_t> y,
                                                       const std::vector<int>& declared_defectives) {
    if (static_cast<int>(y.size()) != matrix.rows())
        fail(ErrorKind::invalid_input, "outcome vector length does not match test count");
    for (int u : declared_defectives)
        if (u < 0 || u >= matrix.cols())
            fail(ErrorKind::invalid_input, "declared defective out of range");

    std::vector<std::vector<int>> pools(declared_defectives.size());
    for (std::size_t k = 0; k < declared_defectives.size(); ++k) {
        const int u_k = declared_defectives[k];
        for (int l = 0; l < matrix.rows(); ++l) {
            if (!y[l] || !matrix.at(l, u_k)) continue;
            bool exclusive = true;
            for (int other : declared_defectives)
                if (other != u_k && matrix.at(l, other)) {
                    exclusive = false;
                    break;
                }
            if (exclusive) pools[k].push_back(l);
        }
    }
    return pools;
}

DecodeResult step2_nonadaptive(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                               const std::vector<int>& declared_defectives) {
    if (declared_defectives.empty())
        fail(ErrorKind::invalid_input, "step 2 requires at least one declared defective");
    std::vector<std::uint8_t> is_declared(static_cast<std::size_t>(matrix.cols()), 0);
    for (int u : declared_defectives) {
        if (u < 0 || u >= matrix.cols())
            fail(ErrorKind::invalid_input, "declared defective out of range");
        is_declared[u] = 1;
    }

    std::vector<int> candidates;
    for (int j = 0; j < matrix.cols(); ++j)
        if (!is_declared[j]) candidates.push_back(j);

    std::vector<std::uint8_t> observed(candidates.size(), 0);
    for (int l = 0; l < matrix.rows(); ++l)
        for (std::size_t idx = 0; idx < candidates.size(); ++idx)
            if (matrix.at(l, candidates[idx])) observed[idx] = 1;

    const auto pools = exclusive_positive_pools(matrix, y, declared_defectives);
    const std::size_t d_hat = declared_defectives.size();
    std::vector<std::vector<std::uint8_t>> non_associated(
        d_hat, std::vector<std::uint8_t>(candidates.size(), 0));

    for (std::size_t k = 0; k < d_hat; ++k) {
        if (pools[k].empty()) {
            DecodeResult result;
            result.defectives = declared_defectives;
            result.failure =
                DecodeFailure{DecodeFailure::Kind::empty_pool_set, static_cast<int>(k)};
            return result;
        }
        for (int l : pools[k]) {
            const auto row = matrix.row(l);
            for (std::size_t idx = 0; idx < candidates.size(); ++idx)
                if (row[candidates[idx]]) non_associated[k][idx] = 1;
        }
    }
    return assemble(declared_defectives, candidates, non_associated, observed);
}

DecodeResult step2_adaptive(const PoolingMatrix& m2,
                            const std::vector<std::vector<std::uint8_t>>& y_per_defective,
                            const std::vector<int>& declared_defectives,
                            const std::vector<int>& remaining_items) {
    if (declared_defectives.empty())
        fail(ErrorKind::invalid_input, "step 2 requires at least one declared defective");
    if (static_cast<int>(remaining_items.size()) != m2.cols())
        fail(ErrorKind::invalid_input, "remaining item list does not match matrix width");
    if (y_per_defective.size() != declared_defectives.size())
        fail(ErrorKind::invalid_input, "need one outcome vector per declared defective");
    for (const auto& y : y_per_defective)
        if (static_cast<int>(y.size()) != m2.rows())
            fail(ErrorKind::invalid_input, "outcome vector length does not match test count");

    std::vector<std::uint8_t> observed(remaining_items.size(), 0);
    for (int l = 0; l < m2.rows(); ++l)
        for (int c = 0; c < m2.cols(); ++c)
            if (m2.at(l, c)) observed[c] = 1;

    const std::size_t d_hat = declared_defectives.size();
    std::vector<std::vector<std::uint8_t>> non_associated(
        d_hat, std::vector<std::uint8_t>(remaining_items.size(), 0));

    for (std::size_t k = 0; k < d_hat; ++k) {
        bool positive_set_empty = true;
        for (int l = 0; l < m2.rows(); ++l) {
            if (!y_per_defective[k][l]) continue;
            positive_set_empty = false;
            const auto row = m2.row(l);
            for (int c = 0; c < m2.cols(); ++c)
                if (row[c]) non_associated[k][c] = 1;
        }
        if (positive_set_empty) {
            DecodeResult result;
            result.defectives = declared_defectives;
            result.failure =
                DecodeFailure{DecodeFailure::Kind::empty_positive_set, static_cast<int>(k)};
            return result;
        }
    }
    return assemble(declared_defectives, remaining_items, non_associated, observed);
}

DecodeResult decode_nonadaptive(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                                double threshold_fraction, int expected_d) {
    const auto step1 = step1_classify(matrix, y, threshold_fraction, expected_d);
    if (!step1.ok()) {
        DecodeResult result;
        result.defectives = step1.declared;
        result.failure = step1.failure;
        return result;
    }
    if (expected_d == 0) return DecodeResult{};
    return step2_nonadaptive(matrix, y, step1.declared);
}

DecodeResult decode_adaptive(const PoolingMatrix& m1, std::span<const std::uint8_t> y1,
                             double threshold_fraction, int expected_d, const PoolingMatrix& m2,
                             const std::vector<std::vector<std::uint8_t>>& y_per_defective,
                             const std::vector<int>& remaining_items) {
    const auto step1 = step1_classify(m1, y1, threshold_fraction, expected_d);
    if (!step1.ok()) {
        DecodeResult result;
        result.defectives = step1.declared;
        result.failure = step1.failure;
        return result;
    }
    if (expected_d == 0) return DecodeResult{};
    return step2_adaptive(m2, y_per_defective, step1.declared, remaining_items);
}

}  // namespace idg
