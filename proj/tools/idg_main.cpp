// Command-line frontend for the IDG group-testing library: design parameter
// computation, instance and matrix generation, decoding, statistics, lower
// bounds, brute-force cross-validation and Monte Carlo sweeps.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "idg/analysis.hpp"
#include "idg/decode.hpp"
#include "idg/design.hpp"
#include "idg/error.hpp"
#include "idg/io.hpp"
#include "idg/model.hpp"
#include "idg/oracle.hpp"
#include "idg/rng.hpp"
#include "idg/sim.hpp"

namespace {

using idg::io::json;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        std::cout.flush();
    } else {
        idg::io::write_file(out_path, content);
    }
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2) + "\n"); }

idg::SideInfo make_side(const std::string& model, int i_max) {
    if (model == "nsi") return idg::SideInfo::nsi();
    if (model == "wsi") {
        if (i_max < 1)
            idg::fail(idg::ErrorKind::invalid_input, "--i-max (>= 1) is required with --model wsi");
        return idg::SideInfo::wsi(i_max);
    }
    idg::fail(idg::ErrorKind::invalid_input, "--model must be nsi or wsi");
}

idg::DesignKind make_design(const std::string& name) {
    if (name == "adaptive") return idg::DesignKind::adaptive;
    if (name == "nonadaptive") return idg::DesignKind::nonadaptive;
    idg::fail(idg::ErrorKind::invalid_input, "--design must be adaptive or nonadaptive");
}

std::vector<std::uint8_t> load_outcomes(const std::string& inline_text, const std::string& path) {
    if (!inline_text.empty() && !path.empty())
        idg::fail(idg::ErrorKind::invalid_input, "pass either --outcomes or --outcomes-file, not both");
    if (!inline_text.empty()) return idg::io::outcomes_from_string(inline_text);
    if (!path.empty()) return idg::io::outcomes_from_string(idg::io::read_file(path));
    idg::fail(idg::ErrorKind::invalid_input, "outcomes are required (--outcomes or --outcomes-file)");
}

int default_threads() {
    if (const char* env = std::getenv("IDG_THREADS")) {
        const int value = std::atoi(env);
        if (value >= 1) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

struct CommonInstanceFlags {
    int n = 0;
    int r = 0;
    int d = 0;
    std::string model = "nsi";
    int i_max = 0;

    void attach(CLI::App* cmd, bool require_counts = true) {
        auto* n_opt = cmd->add_option("--n", n, "number of items");
        auto* r_opt = cmd->add_option("--r", r, "number of inhibitors");
        auto* d_opt = cmd->add_option("--d", d, "number of defectives");
        if (require_counts) {
            n_opt->required();
            r_opt->required();
            d_opt->required();
        }
        cmd->add_option("--model", model, "side-information model: nsi or wsi (default nsi)");
        cmd->add_option("--i-max", i_max,
                        "known maximum inhibitors per defective (required for wsi)");
    }

    idg::SideInfo side() const { return make_side(model, i_max); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "idg: pooling designs, decoding and analysis for the immune-defectives "
        "group-testing model"};
    app.require_subcommand(1);
    app.fallthrough();  // let subcommands see the global --out
    app.footer(
        "File formats:\n"
        "  graph JSON    {\"n\", \"inhibitors\", \"defectives\", \"edges\": [[inh, def], ...]},\n"
        "                0-indexed item ids\n"
        "  matrix file   header line \"T n\", then T rows of n characters over {0,1}\n"
        "  outcomes      one character per test over {0,1}, ordered by test index\n"
        "Probabilities are per-item test-participation probabilities in [0, 1].");

    std::string out_path;
    app.add_option("--out", out_path, "write primary output to this file instead of stdout")
        ->configurable(false);

    // -------------------------------------------------------------- params
    auto* cmd_params = app.add_subcommand(
        "params", "derive design constants (p1, p2, tau, threshold, betas, test counts)");
    CommonInstanceFlags params_flags;
    params_flags.attach(cmd_params);
    double params_delta = 1.0;
    cmd_params->add_option("--delta", params_delta, "target error exponent (default 1)");
    cmd_params->callback([&] {
        const auto params = idg::compute_params(params_flags.n, params_flags.r, params_flags.d,
                                                params_flags.side(), params_delta);
        emit_json(out_path, idg::io::params_to_json(params));
    });

    // ----------------------------------------------------------- gen-matrix
    auto* cmd_matrix = app.add_subcommand("gen-matrix", "generate a Bernoulli(p) pooling matrix");
    int gm_t = 0, gm_n = 0;
    double gm_p = 0.0;
    std::uint64_t gm_seed = 0;
    cmd_matrix->add_option("--t", gm_t, "number of tests (rows)")->required();
    cmd_matrix->add_option("--n", gm_n, "number of items (columns)")->required();
    cmd_matrix->add_option("--p", gm_p, "per-entry participation probability")->required();
    cmd_matrix->add_option("--seed", gm_seed, "RNG seed")->required();
    cmd_matrix->callback([&] {
        const auto matrix = idg::generate_matrix(gm_t, gm_n, gm_p, gm_seed);
        emit(out_path, idg::io::matrix_to_text(matrix));
    });

    // ------------------------------------------------------------ gen-graph
    auto* cmd_graph = app.add_subcommand("gen-graph", "sample a uniform random association graph");
    CommonInstanceFlags graph_flags;
    graph_flags.attach(cmd_graph);
    std::uint64_t gg_seed = 0;
    cmd_graph->add_option("--seed", gg_seed, "RNG seed")->required();
    cmd_graph->callback([&] {
        const auto graph = idg::sample_graph(graph_flags.n, graph_flags.r, graph_flags.d,
                                             graph_flags.side(), gg_seed);
        emit_json(out_path, idg::io::graph_to_json(graph));
    });

    // -------------------------------------------------------------- outcome
    auto* cmd_outcome =
        app.add_subcommand("outcome", "evaluate the outcome vector of a matrix against a graph");
    std::string oc_graph, oc_matrix;
    cmd_outcome->add_option("--graph", oc_graph, "graph JSON file")->required();
    cmd_outcome->add_option("--matrix", oc_matrix, "pooling matrix file")->required();
    cmd_outcome->callback([&] {
        const auto graph = idg::io::graph_from_json(json::parse(idg::io::read_file(oc_graph)));
        const auto matrix = idg::io::matrix_from_text(idg::io::read_file(oc_matrix));
        const auto y = idg::outcome_vector(graph, matrix);
        emit(out_path, idg::io::outcomes_to_string(y) + "\n");
    });

    // --------------------------------------------------------------- decode
    auto* cmd_decode =
        app.add_subcommand("decode", "run the two-step decoder on a matrix and outcome vector");
    std::string dc_matrix, dc_outcomes, dc_outcomes_file, dc_params;
    double dc_threshold = -1.0;
    int dc_expected_d = -1;
    cmd_decode->add_option("--matrix", dc_matrix, "pooling matrix file")->required();
    cmd_decode->add_option("--outcomes", dc_outcomes, "outcome string over {0,1}");
    cmd_decode->add_option("--outcomes-file", dc_outcomes_file, "file with one outcome char per test");
    cmd_decode->add_option("--threshold", dc_threshold, "step-1 positive-fraction threshold");
    cmd_decode->add_option("--params", dc_params, "params JSON file to take the threshold from");
    cmd_decode->add_option("--expected-d", dc_expected_d, "known defective count")->required();
    cmd_decode->callback([&] {
        const auto matrix = idg::io::matrix_from_text(idg::io::read_file(dc_matrix));
        const auto y = load_outcomes(dc_outcomes, dc_outcomes_file);
        double threshold = dc_threshold;
        if (!dc_params.empty())
            threshold = json::parse(idg::io::read_file(dc_params)).at("threshold_fraction").get<double>();
        if (threshold <= 0.0)
            idg::fail(idg::ErrorKind::invalid_input, "provide --threshold or --params");
        const auto result = idg::decode_nonadaptive(matrix, y, threshold, dc_expected_d);
        emit_json(out_path, idg::io::decode_result_to_json(result));
    });

    // ---------------------------------------------------------------- stats
    auto* cmd_stats =
        app.add_subcommand("stats", "exact conditional outcome statistics for a graph");
    std::string st_graph, st_kind;
    double st_p = -1.0;
    int st_item = -1;
    cmd_stats->add_option("--graph", st_graph, "graph JSON file")->required();
    cmd_stats->add_option("--p", st_p, "per-item participation probability")->required();
    cmd_stats->add_option("--item", st_item, "conditioned item (with --kind)");
    cmd_stats->add_option("--kind", st_kind, "one of q1|q1-lb|q2|q2-ub|q3");
    cmd_stats->callback([&] {
        const auto graph = idg::io::graph_from_json(json::parse(idg::io::read_file(st_graph)));
        if (!st_kind.empty()) {
            idg::StatKind kind;
            if (st_kind == "q1") kind = idg::StatKind::q1_exact;
            else if (st_kind == "q1-lb") kind = idg::StatKind::q1_lb;
            else if (st_kind == "q2") kind = idg::StatKind::q2_exact;
            else if (st_kind == "q2-ub") kind = idg::StatKind::q2_ub;
            else if (st_kind == "q3") kind = idg::StatKind::q3_exact;
            else idg::fail(idg::ErrorKind::invalid_input, "--kind must be q1|q1-lb|q2|q2-ub|q3");
            if (st_item < 0)
                idg::fail(idg::ErrorKind::invalid_input, "--item is required with --kind");
            const auto stat = idg::conditional_stat(graph, st_p, st_item, kind);
            emit_json(out_path, json{{"item", st_item},
                                     {"kind", idg::to_string(stat.kind)},
                                     {"value", stat.value}});
            return;
        }

        json defectives = json::array();
        for (int u : graph.defectives())
            defectives.push_back(
                {{"item", u},
                 {"q1_exact", idg::conditional_stat(graph, st_p, u, idg::StatKind::q1_exact).value},
                 {"q1_lb", idg::conditional_stat(graph, st_p, u, idg::StatKind::q1_lb).value}});
        json inhibitors = json::array();
        for (int s : graph.inhibitors())
            inhibitors.push_back(
                {{"item", s},
                 {"q3_exact", idg::conditional_stat(graph, st_p, s, idg::StatKind::q3_exact).value}});
        json report{{"p", st_p},
                    {"defectives", defectives},
                    {"inhibitors", inhibitors},
                    {"q2_exact", nullptr},
                    {"q2_ub", nullptr}};
        for (int item = 0; item < graph.n(); ++item) {
            if (graph.is_defective(item) || graph.is_inhibitor(item)) continue;
            report["q2_exact"] =
                idg::conditional_stat(graph, st_p, item, idg::StatKind::q2_exact).value;
            report["q2_ub"] = idg::conditional_stat(graph, st_p, item, idg::StatKind::q2_ub).value;
            break;
        }
        emit_json(out_path, report);
    });

    // --------------------------------------------------------------- bounds
    auto* cmd_bounds = app.add_subcommand(
        "bounds", "counting and asymptotic lower bounds next to the designed test counts");
    CommonInstanceFlags bounds_flags;
    bounds_flags.attach(cmd_bounds);
    double bounds_delta = 1.0;
    cmd_bounds->add_option("--delta", bounds_delta, "error exponent for the designed counts");
    cmd_bounds->callback([&] {
        const auto side = bounds_flags.side();
        const auto report =
            idg::asymptotic_reference(bounds_flags.n, bounds_flags.r, bounds_flags.d, side);
        json j = idg::io::bound_report_to_json(report);
        j["designed"] = nullptr;
        try {
            const auto params = idg::compute_params(bounds_flags.n, bounds_flags.r, bounds_flags.d,
                                                    side, bounds_delta);
            j["designed"] = json{
                {"t_na", params.t_na},
                {"t1", params.t1},
                {"t2", params.t2},
                {"t_a", static_cast<long long>(params.t1) +
                            static_cast<long long>(bounds_flags.d) * params.t2}};
        } catch (const idg::Error&) {
            // designed counts undefined here (e.g. r = 0); bounds still apply
        }
        emit_json(out_path, j);
    });

    // --------------------------------------------------------------- oracle
    auto* cmd_oracle =
        app.add_subcommand("oracle", "brute-force references: consistency sets and exact error");
    cmd_oracle->require_subcommand(1);

    auto* cmd_enum = cmd_oracle->add_subcommand(
        "enumerate", "list every hypothesis consistent with a matrix and outcome vector");
    std::string en_matrix, en_outcomes, en_outcomes_file, en_graph;
    int en_r = 0, en_d = 0;
    std::string en_model = "nsi";
    int en_imax = 0;
    cmd_enum->add_option("--matrix", en_matrix, "pooling matrix file")->required();
    cmd_enum->add_option("--outcomes", en_outcomes, "outcome string over {0,1}");
    cmd_enum->add_option("--outcomes-file", en_outcomes_file, "outcome file");
    cmd_enum->add_option("--r", en_r, "number of inhibitors")->required();
    cmd_enum->add_option("--d", en_d, "number of defectives")->required();
    cmd_enum->add_option("--model", en_model, "nsi or wsi");
    cmd_enum->add_option("--i-max", en_imax, "I_max for wsi");
    cmd_enum->add_option("--graph", en_graph, "optional graph JSON to test for membership");
    cmd_enum->callback([&] {
        const auto matrix = idg::io::matrix_from_text(idg::io::read_file(en_matrix));
        const auto y = load_outcomes(en_outcomes, en_outcomes_file);
        const auto side = make_side(en_model, en_model == "wsi" ? en_imax : 0);
        const auto set = idg::enumerate_consistent(matrix, y, matrix.cols(), en_r, en_d, side);
        json candidates = json::array();
        for (const auto& g : set.candidates) candidates.push_back(idg::io::graph_to_json(g));
        json j{{"count", set.candidates.size()}, {"candidates", candidates}};
        if (!en_graph.empty()) {
            const auto graph = idg::io::graph_from_json(json::parse(idg::io::read_file(en_graph)));
            j["contains_true_graph"] = set.contains(graph);
        }
        emit_json(out_path, j);
    });

    auto* cmd_xval = cmd_oracle->add_subcommand(
        "xval", "random-instance cross-validation of the decoder against the consistency set");
    CommonInstanceFlags xval_flags;
    xval_flags.attach(cmd_xval);
    int xv_t = 0, xv_trials = 100;
    double xv_p = -1.0, xv_threshold = -1.0;
    std::uint64_t xv_seed = 0;
    cmd_xval->add_option("--t", xv_t, "tests per matrix")->required();
    cmd_xval->add_option("--p", xv_p, "matrix density (default: design p1)");
    cmd_xval->add_option("--threshold", xv_threshold, "step-1 threshold (default: design value)");
    cmd_xval->add_option("--trials", xv_trials, "number of random matrices (default 100)");
    cmd_xval->add_option("--seed", xv_seed, "RNG seed")->required();
    cmd_xval->callback([&] {
        const auto side = xval_flags.side();
        double p = xv_p, threshold = xv_threshold;
        if (p < 0.0 || threshold <= 0.0) {
            const auto params =
                idg::compute_params(xval_flags.n, xval_flags.r, xval_flags.d, side, 1.0);
            if (p < 0.0) p = params.p1;
            if (threshold <= 0.0) threshold = params.threshold_fraction;
        }
        int true_in_set = 0, decoder_success = 0, decoder_shape_valid = 0, decoder_in_set = 0;
        for (int trial = 0; trial < xv_trials; ++trial) {
            const auto graph = idg::sample_graph(xval_flags.n, xval_flags.r, xval_flags.d, side,
                                                 idg::derive_seed(xv_seed, 1, trial));
            const auto matrix = idg::generate_matrix(xv_t, xval_flags.n, p,
                                                     idg::derive_seed(xv_seed, 2, trial));
            const auto y = idg::outcome_vector(graph, matrix);
            const auto set = idg::enumerate_consistent(matrix, y, xval_flags.n, xval_flags.r,
                                                       xval_flags.d, side);
            if (set.contains(graph)) ++true_in_set;
            const auto decoded = idg::decode_nonadaptive(matrix, y, threshold, xval_flags.d);
            if (decoded.ok()) {
                ++decoder_success;
                // answers with a different inhibitor count than r cannot be
                // members of the fixed-shape hypothesis space
                if (static_cast<int>(decoded.inhibitors.size()) == xval_flags.r) {
                    ++decoder_shape_valid;
                    const idg::AssociationGraph declared(xval_flags.n, decoded.inhibitors,
                                                         decoded.defectives, decoded.edges);
                    if (set.contains(declared)) ++decoder_in_set;
                }
            }
        }
        emit_json(out_path, json{{"trials", xv_trials},
                                 {"t", xv_t},
                                 {"p", p},
                                 {"threshold", threshold},
                                 {"true_graph_in_set", true_in_set},
                                 {"decoder_successes", decoder_success},
                                 {"decoder_shape_valid", decoder_shape_valid},
                                 {"decoder_output_in_set", decoder_in_set}});
    });

    auto* cmd_exact = cmd_oracle->add_subcommand(
        "exact-error", "exact failure probability of the non-adaptive pipeline (tiny instances)");
    std::string xe_graph;
    int xe_t = 0;
    double xe_p = -1.0, xe_threshold = -1.0;
    cmd_exact->add_option("--graph", xe_graph, "graph JSON file")->required();
    cmd_exact->add_option("--t", xe_t, "number of tests")->required();
    cmd_exact->add_option("--p", xe_p, "matrix density")->required();
    cmd_exact->add_option("--threshold", xe_threshold, "step-1 threshold")->required();
    cmd_exact->callback([&] {
        const auto graph = idg::io::graph_from_json(json::parse(idg::io::read_file(xe_graph)));
        const double prob = idg::exact_error_probability(graph, xe_t, xe_p, xe_threshold);
        emit_json(out_path,
                  json{{"t", xe_t}, {"p", xe_p}, {"threshold", xe_threshold},
                       {"error_probability", prob}});
    });

    // ------------------------------------------------------------- simulate
    auto* cmd_sim = app.add_subcommand("simulate", "run one seeded end-to-end trial");
    CommonInstanceFlags sim_flags;
    sim_flags.attach(cmd_sim);
    double sim_delta = 1.0;
    std::string sim_design = "adaptive";
    std::uint64_t sim_seed = 0;
    int sim_t = -1, sim_t2 = -1;
    double sim_p = -1.0, sim_p2 = -1.0, sim_threshold = -1.0;
    cmd_sim->add_option("--delta", sim_delta, "target error exponent (default 1)");
    cmd_sim->add_option("--design", sim_design, "adaptive (default) or nonadaptive");
    cmd_sim->add_option("--seed", sim_seed, "trial seed")->required();
    cmd_sim->add_option("--t", sim_t, "override test count (t_na or t1)");
    cmd_sim->add_option("--t2", sim_t2, "override stage-2 test count");
    cmd_sim->add_option("--p", sim_p, "override matrix density (p1)");
    cmd_sim->add_option("--p2", sim_p2, "override stage-2 density");
    cmd_sim->add_option("--threshold", sim_threshold, "override step-1 threshold");
    cmd_sim->callback([&] {
        idg::TrialConfig config;
        config.n = sim_flags.n;
        config.r = sim_flags.r;
        config.d = sim_flags.d;
        config.side = sim_flags.side();
        config.delta = sim_delta;
        config.design = make_design(sim_design);
        if (sim_t >= 0) {
            config.overrides.t_na = sim_t;
            config.overrides.t1 = sim_t;
        }
        if (sim_t2 >= 0) config.overrides.t2 = sim_t2;
        if (sim_p >= 0.0) config.overrides.p1 = sim_p;
        if (sim_p2 >= 0.0) config.overrides.p2 = sim_p2;
        if (sim_threshold > 0.0) config.overrides.threshold = sim_threshold;
        const auto report = idg::run_trial(config, sim_seed);
        emit_json(out_path, idg::io::trial_report_to_json(report));
    });

    // ---------------------------------------------------------------- sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "Monte Carlo grid sweep driven by a config file");
    std::string sw_config, sw_json;
    int sw_threads = 0;
    cmd_sweep->add_option("--config", sw_config, "sweep config JSON file")->required();
    cmd_sweep->add_option("--json", sw_json, "also write the aggregate as JSON to this file");
    cmd_sweep->add_option("--threads", sw_threads,
                          "worker threads (default: IDG_THREADS or hardware)");
    cmd_sweep->callback([&] {
        const auto config = idg::io::sweep_config_from_json(json::parse(idg::io::read_file(sw_config)));
        const int threads = sw_threads >= 1 ? sw_threads : default_threads();
        const auto result = idg::run_sweep(config, threads);
        emit(out_path, idg::sweep_to_csv(result));
        if (!sw_json.empty())
            idg::io::write_file(sw_json, idg::io::sweep_result_to_json(result).dump(2) + "\n");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const idg::Error& e) {
        const json err{{"error", {{"kind", e.kind_name()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const json::exception& e) {
        const json err{{"error", {{"kind", "io"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
