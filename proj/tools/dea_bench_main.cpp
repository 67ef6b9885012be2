// dea-bench: DEA benchmarking toolkit for provider panel data.
// Subcommands: validate (ingest check), run (full study grid), screen
// (super-efficiency outlier screen). Exit codes: 0 success, 1 empty or
// fully failed study, 2 input error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "dea/errors.hpp"
#include "dea/ingest.hpp"
#include "dea/model_bank.hpp"
#include "dea/outlier.hpp"
#include "dea/study.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// Years come as comma-separated entries, each "YYYY" or an inclusive
// "start:end" range.
std::vector<int> parse_years(const std::string& expr) {
    std::vector<int> years;
    for (const auto& token : split_list(expr)) {
        auto colon = token.find(':');
        if (colon == std::string::npos) {
            years.push_back(std::stoi(token));
        } else {
            int a = std::stoi(token.substr(0, colon));
            int b = std::stoi(token.substr(colon + 1));
            if (b < a) throw dea::Error("year range " + token + " is reversed");
            for (int y = a; y <= b; ++y) years.push_back(y);
        }
    }
    std::set<int> unique(years.begin(), years.end());
    return {unique.begin(), unique.end()};
}

std::vector<dea::ModelSpec> parse_models(const std::string& expr) {
    std::vector<dea::ModelSpec> specs;
    for (const auto& name : split_list(expr)) specs.push_back(dea::builtin_model(name));
    return specs;
}

dea::WeightScheme parse_weights(const std::string& kind, double w_pan) {
    dea::WeightScheme scheme;
    scheme.w_pan = w_pan;
    if (kind == "individual") scheme.kind = dea::WeightScheme::Kind::Individual;
    else if (kind == "pan") scheme.kind = dea::WeightScheme::Kind::PanEuropean;
    else throw dea::Error("unknown weight scheme: " + kind + " (expected pan or individual)");
    return scheme;
}

void apply_config_file(const std::string& path, dea::StudyPlan& plan, int& min_year) {
    std::ifstream in(path);
    if (!in) throw dea::UnreadableFile("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw dea::Error(std::string("invalid config JSON: ") + e.what());
    }
    if (j.contains("models")) {
        plan.specs.clear();
        for (const auto& entry : j["models"]) {
            if (entry.is_string()) plan.specs.push_back(dea::builtin_model(entry.get<std::string>()));
            else plan.specs.push_back(dea::model_from_json(entry.dump()));
        }
    }
    if (j.contains("years")) {
        if (j["years"].is_string()) plan.years = parse_years(j["years"].get<std::string>());
        else plan.years = j["years"].get<std::vector<int>>();
    }
    if (j.contains("rts")) {
        plan.rts_set.clear();
        for (const auto& r : j["rts"]) plan.rts_set.push_back(dea::rts_from_string(r.get<std::string>()));
    }
    if (j.contains("methods")) {
        plan.methods.clear();
        for (const auto& m : j["methods"])
            plan.methods.push_back(dea::method_from_string(m.get<std::string>()));
    }
    if (j.contains("seed")) plan.bootstrap.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("bootstrap")) {
        const auto& b = j["bootstrap"];
        if (b.contains("replications")) plan.bootstrap.replications = b["replications"].get<int>();
        if (b.contains("confidence_level"))
            plan.bootstrap.confidence_level = b["confidence_level"].get<double>();
    }
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        std::string kind = w.value("kind", std::string("pan"));
        if (kind == "pan_european") kind = "pan";
        plan.weights = parse_weights(kind, w.value("w_pan", plan.weights.w_pan));
    }
    if (j.contains("unity_tolerance")) plan.unity_tolerance = j["unity_tolerance"].get<double>();
    if (j.contains("trend_r2_threshold"))
        plan.trend_r2_threshold = j["trend_r2_threshold"].get<double>();
    if (j.contains("min_year")) min_year = j["min_year"].get<int>();
}

int cmd_validate(const std::string& data, int min_year, bool strict) {
    dea::IngestOptions opts;
    opts.min_year = min_year;
    opts.strict = strict;
    auto result = dea::load_panel(data, opts);
    std::cout << result.report.to_json() << std::endl;
    return 0;
}

int cmd_run(const std::string& data, const std::string& out_dir, dea::StudyPlan plan, int min_year) {
    dea::IngestOptions opts;
    opts.min_year = min_year;
    auto ingest = dea::load_panel(data, opts);

    if (plan.years.empty()) plan.years = ingest.panel.years();
    auto report = dea::run_study(ingest.panel, plan);
    dea::write_report(report, out_dir);
    {
        std::ofstream ing(std::filesystem::path(out_dir) / "ingest_report.json");
        ing << ingest.report.to_json() << '\n';
    }

    std::cout << "tables: " << report.tables.size() << " completed, " << report.failed.size()
              << " failed (of " << report.planned_cells() << " planned)\n";
    for (const auto& f : report.failed)
        std::cout << "failed " << f.key.file_stem() << ": " << f.reason << "\n";
    if (report.outlier && !report.outlier->flagged.empty()) {
        std::cout << "flagged outliers:";
        for (const auto& code : report.outlier->flagged) std::cout << ' ' << code;
        std::cout << "\n";
    }
    std::cout << "report written to " << out_dir << std::endl;
    return report.tables.empty() ? 1 : 0;
}

int cmd_screen(const std::string& data, dea::StudyPlan plan, int min_year, double threshold,
               double min_hit_share, const std::string& json_path) {
    dea::IngestOptions opts;
    opts.min_year = min_year;
    auto ingest = dea::load_panel(data, opts);
    if (plan.years.empty()) plan.years = ingest.panel.years();

    auto report =
        dea::screen(ingest.panel, plan.specs, plan.years, threshold, min_hit_share, plan.weights);
    if (report.cells.empty()) {
        std::cerr << "screen produced no evaluations; data unusable for the given grid\n";
        for (const auto& f : report.failures)
            std::cerr << "  " << f.model << "/" << f.year << "/" << to_string(f.rts) << ": "
                      << f.reason << "\n";
        return 2;
    }
    report.print_table(std::cout);
    if (!json_path.empty()) {
        std::ofstream js(json_path);
        if (!js) throw dea::UnreadableFile("cannot write " + json_path);
        js << report.to_json() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dea-bench: DEA efficiency benchmarking for provider panel data"};
    app.require_subcommand(1);

    std::string data, out_dir, config_path, json_path;
    std::string models_expr = "1A,1B,2A,2B,3A,3B";
    std::string years_expr;
    std::string rts_expr = "crs,vrs";
    std::string methods_expr = "radial";
    std::string weights_kind = "pan";
    double w_pan = 0.27;
    int min_year = 2008;
    std::uint64_t seed = 0;
    int boot_reps = 1000;
    double confidence = 0.95;
    double unity_tol = 1e-6;
    double trend_r2 = 0.6;
    double threshold = 1.5;
    double min_hit_share = 0.5;
    bool strict = false;
    bool no_slack_stage = false;

    auto* validate = app.add_subcommand("validate", "parse and validate a panel CSV");
    validate->add_option("--data", data, "panel CSV file")->required();
    validate->add_option("--min-year", min_year, "drop rows before this year")->capture_default_str();
    validate->add_flag("--strict", strict, "fail on the first violation");

    auto* run = app.add_subcommand("run", "run the full study grid and write reports");
    run->add_option("--data", data, "panel CSV file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    auto* run_models = run->add_option("--models", models_expr, "comma list of built-in models")->capture_default_str();
    auto* run_years = run->add_option("--years", years_expr, "years, e.g. 2008:2018 or 2009,2012");
    auto* run_rts = run->add_option("--rts", rts_expr, "returns to scale: crs,vrs")->capture_default_str();
    auto* run_methods =
        run->add_option("--methods", methods_expr, "methods: radial,super,sbm,bootstrap")->capture_default_str();
    auto* run_seed = run->add_option("--seed", seed, "master seed for all randomness")->capture_default_str();
    auto* run_reps = run->add_option("--boot-reps", boot_reps, "bootstrap replications")->capture_default_str();
    auto* run_conf = run->add_option("--confidence", confidence, "bootstrap confidence level")->capture_default_str();
    auto* run_weights =
        run->add_option("--weights", weights_kind, "composite weighting: pan or individual")->capture_default_str();
    auto* run_w = run->add_option("--w", w_pan, "pan-European composite weight")->capture_default_str();
    auto* run_unity = run->add_option("--unity-tol", unity_tol, "frontier tie tolerance")->capture_default_str();
    auto* run_trend = run->add_option("--trend-r2", trend_r2, "r-squared threshold for trends")->capture_default_str();
    run->add_option("--min-year", min_year, "drop rows before this year")->capture_default_str();
    run->add_flag("--no-slack-stage", no_slack_stage, "skip the second-stage slack maximization");
    run->add_option("--config", config_path, "JSON study plan (flags override)");

    auto* screen = app.add_subcommand("screen", "super-efficiency outlier screen");
    screen->add_option("--data", data, "panel CSV file")->required();
    auto* screen_models =
        screen->add_option("--models", models_expr, "comma list of built-in models")->capture_default_str();
    auto* screen_years = screen->add_option("--years", years_expr, "years, e.g. 2008:2018");
    screen->add_option("--threshold", threshold, "super-efficiency flag threshold")->capture_default_str();
    screen->add_option("--min-hit-share", min_hit_share, "share of extreme runs that flags")->capture_default_str();
    auto* screen_weights =
        screen->add_option("--weights", weights_kind, "composite weighting: pan or individual")->capture_default_str();
    auto* screen_w = screen->add_option("--w", w_pan, "pan-European composite weight")->capture_default_str();
    screen->add_option("--min-year", min_year, "drop rows before this year")->capture_default_str();
    screen->add_option("--json", json_path, "also write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(data, min_year, strict);

        dea::StudyPlan plan;
        plan.specs = parse_models(models_expr);
        plan.methods = {dea::Method::Radial};

        if (app.got_subcommand(run)) {
            if (!config_path.empty()) apply_config_file(config_path, plan, min_year);
            if (run_models->count()) plan.specs = parse_models(models_expr);
            if (run_years->count()) plan.years = parse_years(years_expr);
            if (run_rts->count() || plan.rts_set.empty()) {
                plan.rts_set.clear();
                for (const auto& r : split_list(rts_expr)) plan.rts_set.push_back(dea::rts_from_string(r));
            }
            if (run_methods->count() || plan.methods.empty()) {
                plan.methods.clear();
                for (const auto& m : split_list(methods_expr))
                    plan.methods.push_back(dea::method_from_string(m));
            }
            if (run_seed->count()) plan.bootstrap.seed = seed;
            if (run_reps->count()) plan.bootstrap.replications = boot_reps;
            if (run_conf->count()) plan.bootstrap.confidence_level = confidence;
            if (run_weights->count() || run_w->count())
                plan.weights = parse_weights(weights_kind, w_pan);
            if (run_unity->count()) plan.unity_tolerance = unity_tol;
            if (run_trend->count()) plan.trend_r2_threshold = trend_r2;
            plan.two_stage_slacks = !no_slack_stage;
            return cmd_run(data, out_dir, std::move(plan), min_year);
        }

        if (app.got_subcommand(screen)) {
            if (screen_models->count()) plan.specs = parse_models(models_expr);
            if (screen_years->count()) plan.years = parse_years(years_expr);
            if (screen_weights->count() || screen_w->count())
                plan.weights = parse_weights(weights_kind, w_pan);
            return cmd_screen(data, std::move(plan), min_year, threshold, min_hit_share, json_path);
        }
    } catch (const dea::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
