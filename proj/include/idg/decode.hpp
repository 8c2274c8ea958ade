#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "idg/matrix.hpp"

namespace idg {

// |T_wj| and |S_wj|: how many tests item j participates in and how many of
// those came back positive.
struct ParticipationStats {
    int tests_in = 0;
    int positives_in = 0;
};

std::vector<ParticipationStats> participation(const PoolingMatrix& matrix,
                                              std::span<const std::uint8_t> y);

struct DecodeFailure {
    enum class Kind { wrong_defective_count, empty_pool_set, empty_positive_set };

    Kind kind;
    // wrong_defective_count: the declared count; empty_*: the 0-based index
    // of the declared defective whose pool set came up empty.
    int value = 0;

    bool operator==(const DecodeFailure&) const = default;
};

const char* to_string(DecodeFailure::Kind kind);

// Failures are carried as values so callers can tabulate them; on failure
// declared_defectives still holds whatever step 1 produced.
struct DecodeResult {
    std::vector<int> defectives;
    std::vector<int> inhibitors;
    std::vector<std::pair<int, int>> edges;
    std::optional<DecodeFailure> failure;

    bool ok() const noexcept { return !failure.has_value(); }
};

struct Step1Result {
    std::vector<int> declared;  // sorted ascending
    std::optional<DecodeFailure> failure;

    bool ok() const noexcept { return !failure.has_value(); }
};

// Step 1: declare item j a defective iff it was tested at all and its
// positive fraction strictly exceeds threshold_fraction. Declares
// wrong_defective_count when the declared count differs from expected_d.
Step1Result step1_classify(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                           double threshold_fraction, int expected_d);

// P_k for each declared defective k: the rows with positive outcome that
// contain k's item and no other declared defective.
std::vector<std::vector<int>> exclusive_positive_pools(const PoolingMatrix& matrix,
                                                       std::span<const std::uint8_t> y,
                                                       const std::vector<int>& declared_defectives);

// Step 2, single-matrix design. An item seen in some P_k pool is
// non-associated with k, every other item is declared associated. Items
// untested in the whole matrix are declared normal.
DecodeResult step2_nonadaptive(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                               const std::vector<int>& declared_defectives);

// Step 2, two-stage design. m2 has one column per remaining (non-declared)
// item; y_per_defective[k] is the outcome vector of the m2 pools each tested
// together with declared defective k.
DecodeResult step2_adaptive(const PoolingMatrix& m2,
                            const std::vector<std::vector<std::uint8_t>>& y_per_defective,
                            const std::vector<int>& declared_defectives,
                            const std::vector<int>& remaining_items);

DecodeResult decode_nonadaptive(const PoolingMatrix& matrix, std::span<const std::uint8_t> y,
                                double threshold_fraction, int expected_d);

DecodeResult decode_adaptive(const PoolingMatrix& m1, std::span<const std::uint8_t> y1,
                             double threshold_fraction, int expected_d, const PoolingMatrix& m2,
                             const std::vector<std::vector<std::uint8_t>>& y_per_defective,
                             const std::vector<int>& remaining_items);

}  // namespace idg
