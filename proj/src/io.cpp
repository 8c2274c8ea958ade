#include "idg/io.hpp"

#include <fstream>
#include <sstream>

#include "idg/error.hpp"

namespace idg::io {

json graph_to_json(const AssociationGraph& graph) {
    json edges = json::array();
    for (const auto& [s, u] : graph.edges()) edges.push_back({s, u});
    return json{{"n", graph.n()},
                {"inhibitors", graph.inhibitors()},
                {"defectives", graph.defectives()},
                {"edges", edges}};
}

AssociationGraph graph_from_json(const json& j) {
    try {
        const int n = j.at("n").get<int>();
        auto inhibitors = j.at("inhibitors").get<std::vector<int>>();
        auto defectives = j.at("defectives").get<std::vector<int>>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                fail(ErrorKind::io, "each edge must be a pair [inhibitor, defective]");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return AssociationGraph(n, std::move(inhibitors), std::move(defectives), std::move(edges));
    } catch (const json::exception& e) {
        fail(ErrorKind::io, std::string("malformed graph JSON: ") + e.what());
    }
}

std::string matrix_to_text(const PoolingMatrix& matrix) {
    std::string text = std::to_string(matrix.rows()) + " " + std::to_string(matrix.cols()) + "\n";
    for (int l = 0; l < matrix.rows(); ++l) {
        for (int c = 0; c < matrix.cols(); ++c) text += matrix.at(l, c) ? '1' : '0';
        text += '\n';
    }
    return text;
}

PoolingMatrix matrix_from_text(const std::string& text) {
    std::istringstream in(text);
    int t = 0, n = 0;
    if (!(in >> t >> n) || t < 1 || n < 1) fail(ErrorKind::io, "matrix header must be \"T n\"");
    PoolingMatrix matrix(t, n);
    std::string line;
    std::getline(in, line);  // rest of header line
    for (int l = 0; l < t; ++l) {
        if (!std::getline(in, line) || static_cast<int>(line.size()) < n)
            fail(ErrorKind::io, "matrix row " + std::to_string(l) + " is missing or short");
        for (int c = 0; c < n; ++c) {
            if (line[c] == '1') matrix.set(l, c, true);
            else if (line[c] != '0')
                fail(ErrorKind::io, "matrix entries must be 0 or 1");
        }
    }
    return matrix;
}

std::string outcomes_to_string(std::span<const std::uint8_t> y) {
    std::string text(y.size(), '0');
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) text[i] = '1';
    return text;
}

std::vector<std::uint8_t> outcomes_from_string(const std::string& text) {
    std::vector<std::uint8_t> y;
    y.reserve(text.size());
    for (char c : text) {
        if (c == '0') y.push_back(0);
        else if (c == '1') y.push_back(1);
        else if (c == '\n' || c == '\r' || c == ' ') continue;
        else fail(ErrorKind::io, "outcome strings may contain only 0 and 1");
    }
    return y;
}

json params_to_json(const DesignParams& params) {
    return json{{"n", params.n},
                {"r", params.r},
                {"d", params.d},
                {"model", params.side.is_wsi() ? "wsi" : "nsi"},
                {"i_max", params.i_eff},
                {"delta", params.delta},
                {"delta1", params.delta1},
                {"delta2", params.delta2},
                {"p1", params.p1},
                {"p2", params.p2},
                {"b_max", params.b_max},
                {"q2_ub", params.q2_ub},
                {"tau", params.tau},
                {"threshold_fraction", params.threshold_fraction},
                {"beta_na", params.beta_na},
                {"beta1", params.beta1},
                {"beta2", params.beta2},
                {"t_na", params.t_na},
                {"t1", params.t1},
                {"t2", params.t2}};
}

json decode_result_to_json(const DecodeResult& result) {
    json edges = json::array();
    for (const auto& [s, u] : result.edges) edges.push_back({s, u});
    json j{{"defectives", result.defectives},
           {"inhibitors", result.inhibitors},
           {"edges", edges},
           {"failure", nullptr}};
    if (result.failure)
        j["failure"] = json{{"kind", to_string(result.failure->kind)}, {"k", result.failure->value}};
    return j;
}

json bound_report_to_json(const BoundReport& report) {
    json terms{{"entropy_term", report.terms.entropy_term},
               {"inhibitor_term", nullptr},
               {"defective_term", nullptr}};
    if (report.terms.inhibitor_term) terms["inhibitor_term"] = *report.terms.inhibitor_term;
    if (report.terms.defective_term) terms["defective_term"] = *report.terms.defective_term;
    json j{{"n", report.n},
           {"r", report.r},
           {"d", report.d},
           {"model", report.side.is_wsi() ? "wsi" : "nsi"},
           {"i_max", report.side.effective_i_max(report.r)},
           {"counting_lb", nullptr},
           {"asymptotic_terms", terms}};
    if (report.counting_lb) j["counting_lb"] = *report.counting_lb;
    return j;
}

json trial_report_to_json(const TrialReport& report) {
    json j{{"seed", report.seed},
           {"success", report.success},
           {"failure_kind", nullptr},
           {"tests_used", report.tests_used}};
    if (report.failure) j["failure_kind"] = to_string(*report.failure);
    return j;
}

json sweep_result_to_json(const SweepResult& result) {
    json cells = json::array();
    for (const auto& cell : result.cells) {
        json row{{"n", cell.n},
                 {"r", cell.r},
                 {"d", cell.d},
                 {"i_max", cell.side.effective_i_max(cell.r)},
                 {"model", cell.side.is_wsi() ? "wsi" : "nsi"},
                 {"delta", cell.delta},
                 {"design", to_string(cell.design)},
                 {"feasible", cell.feasible},
                 {"trials", cell.trials},
                 {"successes", cell.successes},
                 {"rate", cell.rate},
                 {"mean_tests", cell.mean_tests}};
        json failures;
        for (int k = 0; k < kNumTrialFailures; ++k)
            failures[to_string(static_cast<TrialFailure>(k))] = cell.failure_counts[k];
        row["failures"] = failures;
        cells.push_back(row);
    }
    return json{{"master_seed", result.master_seed},
                {"trials_per_cell", result.trials_per_cell},
                {"cells", cells}};
}

SweepConfig sweep_config_from_json(const json& j) {
    try {
        SweepConfig config;
        config.master_seed = j.at("master_seed").get<std::uint64_t>();
        config.trials = j.at("trials").get<int>();
        config.n_values = j.at("n").get<std::vector<int>>();
        config.r_values = j.at("r").get<std::vector<int>>();
        config.d_values = j.at("d").get<std::vector<int>>();
        config.delta_values = j.value("delta", std::vector<double>{1.0});

        const auto models = j.value("model", std::vector<std::string>{"nsi"});
        const auto i_values = j.value("i_max", std::vector<int>{});
        for (const auto& model : models) {
            if (model == "nsi") {
                config.sides.push_back(SideInfo::nsi());
            } else if (model == "wsi") {
                if (i_values.empty())
                    fail(ErrorKind::invalid_input, "wsi cells need an i_max axis");
                for (int i : i_values) config.sides.push_back(SideInfo::wsi(i));
            } else {
                fail(ErrorKind::invalid_input, "model must be \"nsi\" or \"wsi\"");
            }
        }

        for (const auto& name : j.value("design", std::vector<std::string>{"adaptive"})) {
            if (name == "adaptive") config.designs.push_back(DesignKind::adaptive);
            else if (name == "nonadaptive") config.designs.push_back(DesignKind::nonadaptive);
            else fail(ErrorKind::invalid_input, "design must be adaptive or nonadaptive");
        }

        if (j.contains("override")) {
            const auto& o = j.at("override");
            if (o.contains("t_na")) config.overrides.t_na = o.at("t_na").get<int>();
            if (o.contains("t1")) config.overrides.t1 = o.at("t1").get<int>();
            if (o.contains("t2")) config.overrides.t2 = o.at("t2").get<int>();
            if (o.contains("p1")) config.overrides.p1 = o.at("p1").get<double>();
            if (o.contains("p2")) config.overrides.p2 = o.at("p2").get<double>();
            if (o.contains("threshold"))
                config.overrides.threshold = o.at("threshold").get<double>();
        }
        return config;
    } catch (const json::exception& e) {
        fail(ErrorKind::io, std::string("malformed sweep config: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + path);
    out << content;
}

}  // namespace idg::io
