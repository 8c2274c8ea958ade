#include "idg/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "idg/decode.hpp"
#include "idg/error.hpp"
#include "idg/rng.hpp"

namespace idg {

namespace {

constexpr std::uint64_t kGraphStream = 0x67;
constexpr std::uint64_t kStage1Stream = 0x6d31;
constexpr std::uint64_t kStage2Stream = 0x6d32;

TrialFailure classify_step1(const std::vector<int>& declared, const std::vector<int>& truth) {
    for (int u : truth)
        if (!std::binary_search(declared.begin(), declared.end(), u))
            return TrialFailure::step1_missed;
    return TrialFailure::step1_false;
}

TrialReport score(TrialReport report, const DecodeResult& result, const AssociationGraph& truth) {
    if (result.failure &&
        result.failure->kind == DecodeFailure::Kind::wrong_defective_count) {
        report.failure = TrialFailure::wrong_defective_count;
        return report;
    }
    if (result.defectives != truth.defectives()) {
        report.failure = classify_step1(result.defectives, truth.defectives());
        return report;
    }
    if (result.failure) {
        report.failure = result.failure->kind == DecodeFailure::Kind::empty_pool_set
                             ? TrialFailure::empty_pool_set
                             : TrialFailure::empty_positive_set;
        return report;
    }
    if (result.inhibitors != truth.inhibitors() || result.edges != truth.edges()) {
        report.failure = TrialFailure::wrong_association;
        return report;
    }
    report.success = true;
    return report;
}

}  // namespace

const char* to_string(DesignKind design) {
    return design == DesignKind::nonadaptive ? "nonadaptive" : "adaptive";
}

const char* to_string(TrialFailure failure) {
    switch (failure) {
        case TrialFailure::step1_missed: return "Step1Missed";
        case TrialFailure::step1_false: return "Step1False";
        case TrialFailure::wrong_defective_count: return "WrongDefectiveCount";
        case TrialFailure::empty_pool_set: return "EmptyPoolSet";
        case TrialFailure::empty_positive_set: return "EmptyPositiveSet";
        case TrialFailure::wrong_association: return "WrongAssociation";
    }
    return "unknown";
}

TrialReport run_trial(const TrialConfig& config, std::uint64_t seed) {
    TrialReport report;
    report.seed = seed;

    // nothing to recover; the empty declaration is correct by definition
    if (config.r == 0 && config.d == 0) {
        report.success = true;
        report.tests_used = 0;
        return report;
    }

    const auto graph =
        sample_graph(config.n, config.r, config.d, config.side, derive_seed(seed, kGraphStream, 0));
    auto params = compute_params(config.n, config.r, config.d, config.side, config.delta);
    const auto& ov = config.overrides;
    if (ov.t_na) params.t_na = *ov.t_na;
    if (ov.t1) params.t1 = *ov.t1;
    if (ov.t2) params.t2 = *ov.t2;
    if (ov.p1) params.p1 = *ov.p1;
    if (ov.p2) params.p2 = *ov.p2;
    if (ov.threshold) params.threshold_fraction = *ov.threshold;

    if (config.design == DesignKind::nonadaptive) {
        const auto matrix =
            generate_matrix(params.t_na, config.n, params.p1, derive_seed(seed, kStage1Stream, 0));
        const auto y = outcome_vector(graph, matrix);
        report.tests_used = params.t_na;
        const auto result = decode_nonadaptive(matrix, y, params.threshold_fraction, config.d);
        return score(report, result, graph);
    }

    const auto m1 =
        generate_matrix(params.t1, config.n, params.p1, derive_seed(seed, kStage1Stream, 0));
    const auto y1 = outcome_vector(graph, m1);
    const auto step1 = step1_classify(m1, y1, params.threshold_fraction, config.d);
    if (!step1.ok()) {
        report.tests_used = params.t1;
        DecodeResult failed;
        failed.defectives = step1.declared;
        failed.failure = step1.failure;
        return score(report, failed, graph);
    }

    std::vector<int> remaining;
    std::vector<int> column_of(static_cast<std::size_t>(config.n), -1);
    for (int item = 0; item < config.n; ++item) {
        if (std::binary_search(step1.declared.begin(), step1.declared.end(), item)) continue;
        column_of[item] = static_cast<int>(remaining.size());
        remaining.push_back(item);
    }

    const auto m2 = generate_matrix(params.t2, config.n - config.d, params.p2,
                                    derive_seed(seed, kStage2Stream, 0));
    std::vector<std::vector<std::uint8_t>> y_per_defective(step1.declared.size());
    for (std::size_t k = 0; k < step1.declared.size(); ++k) {
        auto& yk = y_per_defective[k];
        yk.resize(static_cast<std::size_t>(m2.rows()));
        for (int l = 0; l < m2.rows(); ++l)
            yk[l] = static_cast<std::uint8_t>(
                outcome_with_extra(graph, m2, l, column_of, step1.declared[k]));
    }

    report.tests_used =
        static_cast<long long>(params.t1) + static_cast<long long>(config.d) * params.t2;
    const auto result = step2_adaptive(m2, y_per_defective, step1.declared, remaining);
    return score(report, result, graph);
}

namespace {

bool cell_feasible(const CellSummary& cell) {
    if (cell.r == 0 && cell.d == 0) return true;
    if (cell.r < 1 || cell.d < 1) return false;  // design formulas need both kinds
    if (cell.n <= cell.r + cell.d) return false;
    try {
        cell.side.validate(cell.r, cell.d);
    } catch (const Error&) {
        return false;
    }
    return true;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, int threads) {
    if (config.trials < 1) fail(ErrorKind::invalid_input, "trials must be >= 1");
    if (config.n_values.empty() || config.r_values.empty() || config.d_values.empty() ||
        config.sides.empty() || config.delta_values.empty() || config.designs.empty())
        fail(ErrorKind::invalid_input, "every grid axis needs at least one value");

    SweepResult result;
    result.master_seed = config.master_seed;
    result.trials_per_cell = config.trials;

    for (int n : config.n_values)
        for (int r : config.r_values)
            for (int d : config.d_values)
                for (const auto& side : config.sides)
                    for (double delta : config.delta_values)
                        for (DesignKind design : config.designs) {
                            CellSummary cell;
                            cell.n = n;
                            cell.r = r;
                            cell.d = d;
                            cell.side = side;
                            cell.delta = delta;
                            cell.design = design;
                            cell.feasible = cell_feasible(cell);
                            result.cells.push_back(cell);
                        }

    struct Task {
        std::size_t cell;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        if (!result.cells[c].feasible) continue;
        for (int t = 0; t < config.trials; ++t) tasks.push_back({c, t});
    }
    std::vector<TrialReport> reports(tasks.size());

    const auto worker_body = [&](std::atomic<std::size_t>& cursor) {
        for (std::size_t i = cursor.fetch_add(1); i < tasks.size(); i = cursor.fetch_add(1)) {
            const auto& task = tasks[i];
            const auto& cell = result.cells[task.cell];
            TrialConfig trial_config{cell.n,     cell.r,      cell.d,          cell.side,
                                     cell.delta, cell.design, config.overrides};
            reports[i] = run_trial(trial_config,
                                   derive_seed(config.master_seed, task.cell, task.trial));
        }
    };

    std::atomic<std::size_t> cursor{0};
    if (threads <= 1) {
        worker_body(cursor);
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(tasks.size()) + 1);
        for (int w = 0; w < count; ++w) pool.emplace_back([&] { worker_body(cursor); });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& cell = result.cells[tasks[i].cell];
        const auto& report = reports[i];
        ++cell.trials;
        if (report.success) ++cell.successes;
        else ++cell.failure_counts[static_cast<int>(*report.failure)];
        cell.mean_tests += static_cast<double>(report.tests_used);
    }
    for (auto& cell : result.cells) {
        if (cell.trials > 0) {
            cell.rate = static_cast<double>(cell.successes) / cell.trials;
            cell.mean_tests /= cell.trials;
        }
    }
    return result;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::string csv =
        "n,r,d,i_max,delta,design,trials,successes,rate,mean_tests,"
        "step1_missed,step1_false,wrong_defective_count,empty_pool_set,"
        "empty_positive_set,wrong_association,note\n";
    char line[512];
    for (const auto& cell : result.cells) {
        char delta_text[64], rate_text[64], tests_text[64];
        std::snprintf(delta_text, sizeof delta_text, "%.6g", cell.delta);
        if (cell.feasible) {
            std::snprintf(rate_text, sizeof rate_text, "%.6f", cell.rate);
            std::snprintf(tests_text, sizeof tests_text, "%.2f", cell.mean_tests);
        } else {
            rate_text[0] = '\0';
            tests_text[0] = '\0';
        }
        std::snprintf(line, sizeof line, "%d,%d,%d,%d,%s,%s,%d,%d,%s,%s,%d,%d,%d,%d,%d,%d,%s\n",
                      cell.n, cell.r, cell.d, cell.side.effective_i_max(cell.r), delta_text,
                      to_string(cell.design), cell.trials, cell.successes, rate_text, tests_text,
                      cell.failure_counts[0], cell.failure_counts[1], cell.failure_counts[2],
                      cell.failure_counts[3], cell.failure_counts[4], cell.failure_counts[5],
                      cell.feasible ? "" : "infeasible");
        csv += line;
    }
    return csv;
}

}  // namespace idg
