#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idg/design.hpp"
#include "idg/model.hpp"

namespace idg {

enum class DesignKind { nonadaptive, adaptive };

const char* to_string(DesignKind design);

// One bucket per way a trial can miss the ground truth; a non-successful
// trial lands in exactly one.
enum class TrialFailure {
    step1_missed,           // right count, but a true defective was not declared
    step1_false,            // right count, all defectives declared, plus an impostor
    wrong_defective_count,  // step 1 declared d_hat != d
    empty_pool_set,         // a declared defective had no exclusive positive pool
    empty_positive_set,     // a stage-2 outcome vector was all negative
    wrong_association,      // defectives right, edge pattern or item roles wrong
};

inline constexpr int kNumTrialFailures = 6;

const char* to_string(TrialFailure failure);

// Explicit (T, p, threshold) overrides for ablations; defaults always come
// from compute_params.
struct Overrides {
    std::optional<int> t_na;
    std::optional<int> t1;
    std::optional<int> t2;
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<double> threshold;

    bool any() const {
        return t_na || t1 || t2 || p1 || p2 || threshold;
    }
};

struct TrialConfig {
    int n = 0;
    int r = 0;
    int d = 0;
    SideInfo side;
    double delta = 1.0;
    DesignKind design = DesignKind::adaptive;
    Overrides overrides;
};

struct TrialReport {
    std::uint64_t seed = 0;
    bool success = false;
    std::optional<TrialFailure> failure;
    long long tests_used = 0;
};

// Samples a ground-truth graph, runs the full design + decode pipeline and
// scores the declared triple against the truth. Deterministic given seed.
TrialReport run_trial(const TrialConfig& config, std::uint64_t seed);

// Cross-product grid; cells are enumerated n-major in the axis order below
// and the cell index feeds per-trial seed derivation, so skipped cells do
// not shift the seeds of later ones.
struct SweepConfig {
    std::uint64_t master_seed = 0;
    int trials = 1;
    std::vector<int> n_values;
    std::vector<int> r_values;
    std::vector<int> d_values;
    std::vector<SideInfo> sides;
    std::vector<double> delta_values;
    std::vector<DesignKind> designs;
    Overrides overrides;
};

struct CellSummary {
    int n = 0;
    int r = 0;
    int d = 0;
    SideInfo side;
    double delta = 1.0;
    DesignKind design = DesignKind::adaptive;
    bool feasible = true;
    int trials = 0;
    int successes = 0;
    double rate = 0.0;
    double mean_tests = 0.0;
    std::array<int, kNumTrialFailures> failure_counts{};
};

struct SweepResult {
    std::uint64_t master_seed = 0;
    int trials_per_cell = 0;
    std::vector<CellSummary> cells;
};

// threads <= 1 runs serially; any thread count yields identical results.
SweepResult run_sweep(const SweepConfig& config, int threads = 1);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace idg
