#include "dea/outlier.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>

#include "dea/engine.hpp"
#include "dea/errors.hpp"
#include "dea/model_bank.hpp"

namespace dea {

void flag_outliers(OutlierReport& report) {
    report.per_dmu.clear();
    report.flagged.clear();
    for (const auto& cell : report.cells) {
        auto& stats = report.per_dmu[cell.dmu_code];
        stats.runs += 1;
        bool hit = cell.infeasible || cell.score > report.threshold;
        if (hit) stats.hits += 1;
        if (!cell.infeasible && cell.score > stats.max_score) stats.max_score = cell.score;
    }
    for (const auto& [code, stats] : report.per_dmu)
        if (stats.runs > 0 && stats.hit_share() >= report.min_hit_share) report.flagged.insert(code);
    report.rule = "flag DMUs whose share of super-efficiency runs above " +
                  std::to_string(report.threshold) + " (or infeasible under VRS) is >= " +
                  std::to_string(report.min_hit_share);
}

OutlierReport screen(const Panel& panel, const std::vector<ModelSpec>& specs,
                     const std::vector<int>& years, double threshold, double min_hit_share,
                     const WeightScheme& weights) {
    if (specs.empty()) throw Error("screen needs at least one model");
    if (!(threshold > 1.0)) throw Error("screen threshold must exceed 1");
    if (!(min_hit_share > 0.0 && min_hit_share <= 1.0)) throw Error("min_hit_share must lie in (0,1]");

    OutlierReport report;
    report.threshold = threshold;
    report.min_hit_share = min_hit_share;

    DeaConfig cfg;
    cfg.method = Method::SuperEfficiency;
    for (const auto& spec : specs) {
        for (int year : years) {
            for (Rts rts : {Rts::Crs, Rts::Vrs}) {
                cfg.rts = rts;
                try {
                    FactorMatrix fm = materialize(panel, spec, year, weights);
                    fm.validate(2);
                    BatchResults batch = run_all(fm, cfg);
                    for (const auto& r : batch.results) {
                        ScreenCell cell;
                        cell.model = spec.name;
                        cell.year = year;
                        cell.rts = rts;
                        cell.dmu_code = r.dmu.code;
                        cell.infeasible = r.status != SolveStatus::Optimal;
                        cell.score = cell.infeasible ? std::nan("") : r.score;
                        report.cells.push_back(std::move(cell));
                    }
                    for (const auto& f : batch.failures)
                        report.failures.push_back({spec.name, year, rts, f.dmu_code + ": " + f.message});
                } catch (const Error& e) {
                    report.failures.push_back({spec.name, year, rts, e.what()});
                }
            }
        }
    }
    flag_outliers(report);
    return report;
}

std::string OutlierReport::to_json() const {
    nlohmann::ordered_json j;
    j["threshold"] = threshold;
    j["min_hit_share"] = min_hit_share;
    j["rule"] = rule;
    j["flagged"] = flagged;
    nlohmann::ordered_json dmus;
    for (const auto& [code, stats] : per_dmu) {
        dmus[code] = {{"runs", stats.runs},
                      {"hits", stats.hits},
                      {"hit_share", stats.hit_share()},
                      {"max_super_efficiency", stats.max_score}};
    }
    j["per_dmu"] = dmus;
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json cell = {{"model", c.model},
                                       {"year", c.year},
                                       {"rts", to_string(c.rts)},
                                       {"dmu", c.dmu_code},
                                       {"infeasible", c.infeasible}};
        if (c.infeasible) cell["score"] = nullptr;
        else cell["score"] = c.score;
        j["cells"].push_back(std::move(cell));
    }
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : failures)
        j["failures"].push_back(
            {{"model", f.model}, {"year", f.year}, {"rts", to_string(f.rts)}, {"reason", f.reason}});
    return j.dump(2);
}

void OutlierReport::print_table(std::ostream& os) const {
    os << "outlier screen: threshold " << threshold << ", min hit share " << min_hit_share << "\n";
    os << std::left << std::setw(10) << "dmu" << std::right << std::setw(8) << "runs" << std::setw(8)
       << "hits" << std::setw(12) << "hit_share" << std::setw(12) << "max_super"
       << "  flagged\n";
    for (const auto& [code, stats] : per_dmu) {
        os << std::left << std::setw(10) << code << std::right << std::setw(8) << stats.runs
           << std::setw(8) << stats.hits << std::setw(12) << std::fixed << std::setprecision(3)
           << stats.hit_share() << std::setw(12) << std::setprecision(4) << stats.max_score
           << (flagged.count(code) ? "  *" : "") << "\n";
        os.unsetf(std::ios::fixed);
    }
    if (!failures.empty()) os << failures.size() << " grid cell(s) failed; see JSON report\n";
}

}  // namespace dea
