#include "dea/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>

#include "dea/errors.hpp"
#include "dea/stats.hpp"

namespace dea {

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Scores of Optimal results per DMU across the years of one grid slice.
std::map<std::string, std::vector<std::pair<int, double>>> slice_scores(const StudyReport& report,
                                                                        const std::string& model,
                                                                        Rts rts, Method method) {
    std::map<std::string, std::vector<std::pair<int, double>>> by_dmu;
    std::set<int> years_seen;
    for (const auto& [key, table] : report.tables) {
        if (key.model != model || key.rts != rts || key.method != method) continue;
        years_seen.insert(key.year);
        for (const auto& r : table.results)
            if (r.status == SolveStatus::Optimal) by_dmu[r.dmu.code].push_back({key.year, r.score});
    }
    if (years_seen.size() < 2)
        throw InsufficientYears("slice " + model + "/" + to_string(rts) + "/" + to_string(method) +
                                " covers " + std::to_string(years_seen.size()) + " year(s)");
    return by_dmu;
}

}  // namespace

void StudyPlan::validate() const {
    if (specs.empty()) throw Error("study plan has no models");
    if (years.empty()) throw Error("study plan has no years");
    if (rts_set.empty()) throw Error("study plan has no returns-to-scale set");
    if (methods.empty()) throw Error("study plan has no methods");
    for (const auto& spec : specs) spec.validate();
    bootstrap.validate();
}

std::string TableKey::file_stem() const {
    return model + "_" + std::to_string(year) + "_" + to_string(rts) + "_" + to_string(method);
}

std::size_t StudyReport::planned_cells() const {
    return plan.specs.size() * plan.years.size() * plan.rts_set.size() * plan.methods.size();
}

std::map<std::string, int> rank(const std::vector<DeaResult>& table, double unity_tol) {
    std::vector<std::size_t> order(table.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto better = [&](std::size_t a, std::size_t b) {
        bool inf_a = table[a].status != SolveStatus::Optimal;
        bool inf_b = table[b].status != SolveStatus::Optimal;
        if (inf_a != inf_b) return inf_a;  // unmatched extremes first
        if (inf_a) return false;
        if (table[a].score != table[b].score) return table[a].score > table[b].score;
        return table[a].dmu.code < table[b].dmu.code;
    };
    std::sort(order.begin(), order.end(), better);

    std::map<std::string, int> ranks;
    int current_rank = 0;
    bool have_leader = false;
    bool leader_infeasible = false;
    double leader_score = 0.0;
    for (std::size_t idx : order) {
        const auto& r = table[idx];
        bool infeasible = r.status != SolveStatus::Optimal;
        bool new_group = !have_leader || leader_infeasible != infeasible ||
                         (!infeasible && leader_score - r.score > unity_tol);
        if (new_group) {
            ++current_rank;
            have_leader = true;
            leader_infeasible = infeasible;
            leader_score = infeasible ? 0.0 : r.score;
        }
        ranks[r.dmu.code] = current_rank;
    }
    return ranks;
}

TrendResult trend_check(const std::vector<std::pair<int, double>>& scores_by_year,
                        double r2_threshold) {
    if (scores_by_year.size() < 3)
        throw InsufficientYears("trend check needs at least 3 years, got " +
                                std::to_string(scores_by_year.size()));
    std::vector<double> x, y;
    for (const auto& [year, score] : scores_by_year) {
        x.push_back(year);
        y.push_back(score);
    }
    auto fit = stats::ols(x, y);
    TrendResult t;
    t.slope = fit.slope;
    t.r_squared = fit.r_squared;
    t.zero_spread = fit.zero_variance;
    t.is_trend = !fit.zero_variance && fit.r_squared >= r2_threshold;
    return t;
}

std::vector<DmuDispersion> dispersion(const StudyReport& report, const std::string& model, Rts rts,
                                      Method method) {
    auto by_dmu = slice_scores(report, model, rts, method);
    std::vector<DmuDispersion> rows;
    for (const auto& [code, series] : by_dmu) {
        if (series.size() < 2) continue;
        std::vector<double> scores;
        for (const auto& [year, score] : series) scores.push_back(score);
        auto f = stats::five_number(scores);
        DmuDispersion d;
        d.dmu_code = code;
        d.n_years = static_cast<int>(scores.size());
        d.min = f.min;
        d.q1 = f.q1;
        d.median = f.median;
        d.q3 = f.q3;
        d.max = f.max;
        d.iqr = f.iqr();
        d.stddev = stats::sample_stddev(scores);
        rows.push_back(std::move(d));
    }
    return rows;
}

std::vector<DmuTrend> trends(const StudyReport& report, const std::string& model, Rts rts,
                             Method method) {
    auto by_dmu = slice_scores(report, model, rts, method);
    std::vector<DmuTrend> rows;
    for (auto& [code, series] : by_dmu) {
        if (series.size() < 3) continue;
        std::sort(series.begin(), series.end());
        DmuTrend t;
        t.dmu_code = code;
        t.n_years = static_cast<int>(series.size());
        t.trend = trend_check(series, report.plan.trend_r2_threshold);
        rows.push_back(std::move(t));
    }
    return rows;
}

std::map<std::string, ModelAverage> model_averages(const StudyReport& report) {
    // Scores per model, plus the DMU sets per model to build the shared
    // aggregate across A/B siblings.
    std::map<std::string, std::vector<std::pair<std::string, double>>> scores;
    std::map<std::string, std::set<std::string>> dmus;
    for (const auto& [key, table] : report.tables) {
        if (key.method != Method::Radial) continue;
        for (const auto& r : table.results) {
            if (r.status != SolveStatus::Optimal) continue;
            scores[key.model].push_back({r.dmu.code, r.score});
            dmus[key.model].insert(r.dmu.code);
        }
    }

    auto sibling = [](const std::string& name) -> std::string {
        if (name.empty()) return {};
        std::string other = name;
        if (other.back() == 'A') other.back() = 'B';
        else if (other.back() == 'B') other.back() = 'A';
        else return {};
        return other;
    };

    std::map<std::string, ModelAverage> out;
    for (const auto& [model, pairs] : scores) {
        ModelAverage avg;
        avg.n_scores = static_cast<int>(pairs.size());
        double sum = 0;
        for (const auto& [code, score] : pairs) sum += score;
        avg.mean_all = sum / static_cast<double>(pairs.size());

        std::string other = sibling(model);
        if (!other.empty() && dmus.count(other)) {
            std::vector<double> shared;
            for (const auto& [code, score] : pairs)
                if (dmus.at(other).count(code)) shared.push_back(score);
            if (!shared.empty()) avg.mean_shared = stats::mean(shared);
        }
        out[model] = avg;
    }
    return out;
}

StudyReport run_study(const Panel& panel, const StudyPlan& plan) {
    plan.validate();
    StudyReport report;
    report.plan = plan;

    DeaConfig cfg;
    cfg.unity_tolerance = plan.unity_tolerance;
    cfg.two_stage_slacks = plan.two_stage_slacks;

    for (const auto& spec : plan.specs) {
        for (int year : plan.years) {
            FactorMatrix fm;
            std::string materialize_error;
            MaterializeReport mrep;
            try {
                fm = materialize(panel, spec, year, plan.weights, &mrep);
            } catch (const Error& e) {
                materialize_error = e.what();
            }
            for (const auto& d : mrep.dropped)
                report.dropped.push_back({spec.name, year, d.dmu_code, d.factor, d.reason});

            for (Rts rts : plan.rts_set) {
                for (Method method : plan.methods) {
                    TableKey key{spec.name, year, rts, method};
                    if (!materialize_error.empty()) {
                        report.failed.push_back({key, materialize_error});
                        continue;
                    }
                    try {
                        ResultTable table;
                        table.key = key;
                        cfg.rts = rts;
                        if (method == Method::Bootstrap) {
                            cfg.method = Method::Radial;
                            BootstrapConfig bcfg = plan.bootstrap;
                            bcfg.seed = fnv1a(key.file_stem(), plan.bootstrap.seed);
                            table.bootstrap = bootstrap_dea(fm, cfg, bcfg);
                            for (const auto& b : table.bootstrap) {
                                DeaResult r;
                                r.dmu = b.dmu;
                                r.score = b.bias_corrected_score;
                                r.status = SolveStatus::Optimal;
                                table.results.push_back(std::move(r));
                            }
                        } else {
                            cfg.method = method;
                            BatchResults batch = run_all(fm, cfg);
                            if (!batch.failures.empty()) {
                                std::string why;
                                for (const auto& f : batch.failures)
                                    why += (why.empty() ? "" : "; ") + f.dmu_code + ": " + f.message;
                                report.failed.push_back({key, why});
                                continue;
                            }
                            table.results = std::move(batch.results);
                        }
                        table.ranks = rank(table.results, plan.unity_tolerance);
                        report.tables.emplace(key, std::move(table));
                    } catch (const Error& e) {
                        report.failed.push_back({key, e.what()});
                    }
                }
            }
        }
    }

    report.model_averages = model_averages(report);

    // Scale efficiency wherever both RTS variants of a radial table completed.
    for (const auto& [key, crs_table] : report.tables) {
        if (key.method != Method::Radial || key.rts != Rts::Crs) continue;
        TableKey vrs_key = key;
        vrs_key.rts = Rts::Vrs;
        auto it = report.tables.find(vrs_key);
        if (it == report.tables.end()) continue;
        std::map<std::string, const DeaResult*> vrs_by_code;
        for (const auto& r : it->second.results)
            if (r.status == SolveStatus::Optimal) vrs_by_code[r.dmu.code] = &r;
        for (const auto& r : crs_table.results) {
            if (r.status != SolveStatus::Optimal) continue;
            auto v = vrs_by_code.find(r.dmu.code);
            if (v == vrs_by_code.end()) continue;
            report.scale_efficiency.push_back(
                {key.model, key.year, r.dmu.code, scale_efficiency(r, *v->second)});
        }
    }

    // Outlier view derived from the super-efficiency tables, when present.
    bool has_super = false;
    OutlierReport outlier;
    outlier.threshold = plan.outlier_threshold;
    outlier.min_hit_share = plan.outlier_min_hit_share;
    for (const auto& [key, table] : report.tables) {
        if (key.method != Method::SuperEfficiency) continue;
        has_super = true;
        for (const auto& r : table.results) {
            ScreenCell cell;
            cell.model = key.model;
            cell.year = key.year;
            cell.rts = key.rts;
            cell.dmu_code = r.dmu.code;
            cell.infeasible = r.status != SolveStatus::Optimal;
            cell.score = cell.infeasible ? std::nan("") : r.score;
            outlier.cells.push_back(std::move(cell));
        }
    }
    if (has_super) {
        flag_outliers(outlier);
        report.outlier = std::move(outlier);
    }
    return report;
}

void write_report(const StudyReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    for (const auto& [key, table] : report.tables) {
        std::ofstream csv(out_dir / (key.file_stem() + ".csv"));
        if (!csv) throw UnreadableFile("cannot write table CSV in " + out_dir.string());
        csv << "dmu,score,rank,status\n";
        for (const auto& r : table.results) {
            bool optimal = r.status == SolveStatus::Optimal;
            csv << r.dmu.code << ',' << (optimal ? fmt_double(r.score) : "") << ','
                << table.ranks.at(r.dmu.code) << ',' << (optimal ? "optimal" : "infeasible") << '\n';
        }
    }

    nlohmann::ordered_json summary;
    {
        nlohmann::ordered_json models = nlohmann::ordered_json::array();
        for (const auto& spec : report.plan.specs) {
            nlohmann::ordered_json m;
            m["name"] = spec.name;
            m["inputs"] = nlohmann::ordered_json::array();
            for (Factor f : spec.input_factors) m["inputs"].push_back(to_string(f));
            m["outputs"] = nlohmann::ordered_json::array();
            for (Factor f : spec.output_factors) m["outputs"].push_back(to_string(f));
            m["excluded_dmus"] = spec.excluded_dmus;
            m["factor_warning"] = spec.factor_warning();
            models.push_back(std::move(m));
        }
        summary["models"] = std::move(models);
        summary["years"] = report.plan.years;
        nlohmann::ordered_json rts = nlohmann::ordered_json::array();
        for (Rts r : report.plan.rts_set) rts.push_back(to_string(r));
        summary["rts"] = std::move(rts);
        nlohmann::ordered_json methods = nlohmann::ordered_json::array();
        for (Method m : report.plan.methods) methods.push_back(to_string(m));
        summary["methods"] = std::move(methods);
        summary["weights"] = {{"kind", report.plan.weights.kind == WeightScheme::Kind::Individual
                                           ? "individual"
                                           : "pan_european"},
                              {"w_pan", report.plan.weights.w_pan}};
        summary["bootstrap"] = {{"replications", report.plan.bootstrap.replications},
                                {"seed", report.plan.bootstrap.seed},
                                {"confidence_level", report.plan.bootstrap.confidence_level}};
    }
    summary["tables_completed"] = report.tables.size();
    summary["tables_failed"] = report.failed.size();
    summary["failed_cells"] = nlohmann::ordered_json::array();
    for (const auto& f : report.failed)
        summary["failed_cells"].push_back({{"model", f.key.model},
                                           {"year", f.key.year},
                                           {"rts", to_string(f.key.rts)},
                                           {"method", to_string(f.key.method)},
                                           {"reason", f.reason}});
    summary["dropped_dmus"] = nlohmann::ordered_json::array();
    for (const auto& d : report.dropped)
        summary["dropped_dmus"].push_back({{"model", d.model},
                                           {"year", d.year},
                                           {"dmu", d.dmu_code},
                                           {"factor", d.factor},
                                           {"reason", d.reason}});

    nlohmann::ordered_json averages;
    for (const auto& [model, avg] : report.model_averages) {
        nlohmann::ordered_json a;
        a["mean_all"] = avg.mean_all;
        if (avg.mean_shared) a["mean_shared"] = *avg.mean_shared;
        else a["mean_shared"] = nullptr;
        a["n_scores"] = avg.n_scores;
        averages[model] = std::move(a);
    }
    summary["model_averages"] = std::move(averages);

    nlohmann::ordered_json dispersion_rows = nlohmann::ordered_json::array();
    nlohmann::ordered_json trend_rows = nlohmann::ordered_json::array();
    {
        std::set<std::tuple<std::string, Rts, Method>> slices;
        for (const auto& [key, table] : report.tables) slices.insert({key.model, key.rts, key.method});
        for (const auto& [model, rts, method] : slices) {
            std::vector<DmuDispersion> drows;
            std::vector<DmuTrend> trows;
            try {
                drows = dispersion(report, model, rts, method);
                trows = trends(report, model, rts, method);
            } catch (const InsufficientYears&) {
                continue;  // single-year slices carry no dispersion information
            }
            for (const auto& d : drows)
                dispersion_rows.push_back({{"model", model},
                                           {"rts", to_string(rts)},
                                           {"method", to_string(method)},
                                           {"dmu", d.dmu_code},
                                           {"n_years", d.n_years},
                                           {"min", d.min},
                                           {"q1", d.q1},
                                           {"median", d.median},
                                           {"q3", d.q3},
                                           {"max", d.max},
                                           {"iqr", d.iqr},
                                           {"stddev", d.stddev}});
            for (const auto& t : trows)
                trend_rows.push_back({{"model", model},
                                      {"rts", to_string(rts)},
                                      {"method", to_string(method)},
                                      {"dmu", t.dmu_code},
                                      {"n_years", t.n_years},
                                      {"classification", t.trend.classification()},
                                      {"slope", t.trend.slope},
                                      {"r_squared", t.trend.r_squared},
                                      {"zero_spread", t.trend.zero_spread}});
        }
    }
    summary["dispersion"] = std::move(dispersion_rows);
    summary["trends"] = std::move(trend_rows);

    nlohmann::ordered_json scale_rows = nlohmann::ordered_json::array();
    for (const auto& s : report.scale_efficiency)
        scale_rows.push_back(
            {{"model", s.model}, {"year", s.year}, {"dmu", s.dmu_code}, {"value", s.value}});
    summary["scale_efficiency"] = std::move(scale_rows);

    if (report.outlier) summary["outlier"] = nlohmann::ordered_json::parse(report.outlier->to_json());
    else summary["outlier"] = nullptr;

    nlohmann::ordered_json notes = nlohmann::ordered_json::array();
    for (const auto& spec : report.plan.specs)
        if (spec.factor_warning())
            notes.push_back("model " + spec.name + " uses more than four factors; expect a larger efficient set");
    for (Method m : report.plan.methods)
        if (m == Method::Bootstrap)
            notes.push_back("bias-corrected scores can understate efficiency on observed (non-simulated) data; treat the bootstrap as a sensitivity check");
    summary["notes"] = std::move(notes);

    {
        std::ofstream js(out_dir / "summary.json");
        if (!js) throw UnreadableFile("cannot write summary.json in " + out_dir.string());
        js << summary.dump(2) << '\n';
    }

    {
        std::ofstream box(out_dir / "boxplot_data.csv");
        box << "model,rts,method,dmu,n_years,min,q1,median,q3,max,iqr,stddev\n";
        std::set<std::tuple<std::string, Rts, Method>> slices;
        for (const auto& [key, table] : report.tables) slices.insert({key.model, key.rts, key.method});
        for (const auto& [model, rts, method] : slices) {
            std::vector<DmuDispersion> drows;
            try {
                drows = dispersion(report, model, rts, method);
            } catch (const InsufficientYears&) {
                continue;
            }
            for (const auto& d : drows)
                box << model << ',' << to_string(rts) << ',' << to_string(method) << ',' << d.dmu_code
                    << ',' << d.n_years << ',' << fmt_double(d.min) << ',' << fmt_double(d.q1) << ','
                    << fmt_double(d.median) << ',' << fmt_double(d.q3) << ',' << fmt_double(d.max)
                    << ',' << fmt_double(d.iqr) << ',' << fmt_double(d.stddev) << '\n';
        }
    }

    {
        std::ofstream map_csv(out_dir / "map_data.csv");
        map_csv << "model,rts,dmu,mean_score,n_years\n";
        std::map<std::tuple<std::string, Rts, std::string>, std::vector<double>> by_dmu;
        for (const auto& [key, table] : report.tables) {
            if (key.method != Method::Radial) continue;
            for (const auto& r : table.results)
                if (r.status == SolveStatus::Optimal)
                    by_dmu[{key.model, key.rts, r.dmu.code}].push_back(r.score);
        }
        for (const auto& [k, scores] : by_dmu) {
            const auto& [model, rts, code] = k;
            map_csv << model << ',' << to_string(rts) << ',' << code << ','
                    << fmt_double(stats::mean(scores)) << ',' << scores.size() << '\n';
        }
    }

    bool any_bootstrap = false;
    for (const auto& [key, table] : report.tables) any_bootstrap |= !table.bootstrap.empty();
    if (any_bootstrap) {
        std::ofstream bs(out_dir / "bootstrap_detail.csv");
        bs << "model,year,rts,dmu,original,bias,bias_corrected,ci_lower,ci_upper\n";
        for (const auto& [key, table] : report.tables) {
            for (const auto& b : table.bootstrap)
                bs << key.model << ',' << key.year << ',' << to_string(key.rts) << ',' << b.dmu.code
                   << ',' << fmt_double(b.original_score) << ',' << fmt_double(b.bias) << ','
                   << fmt_double(b.bias_corrected_score) << ',' << fmt_double(b.ci_lower) << ','
                   << fmt_double(b.ci_upper) << '\n';
        }
    }
}

}  // namespace dea
