#include "dea/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "dea/errors.hpp"
#include "dea/stats.hpp"

namespace dea {

namespace {

// Minimal RFC-4180-style field splitter; quoted fields may contain commas
// and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

const std::vector<std::string> kRequiredColumns = {
    "ansp_code", "ansp_name", "year", "atco_hours", "non_atco_share", "acc_count",
    "tower_count", "flight_hours", "airport_movements", "er_unit_cost", "tnl_unit_cost"};

double parse_number(const std::string& s, const std::string& col) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw Error("column " + col + ": not a number: '" + s + "'");
    }
    if (pos != s.size()) throw Error("column " + col + ": trailing characters in '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& col) {
    double v = parse_number(s, col);
    if (v != std::floor(v)) throw Error("column " + col + ": not an integer: '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace

IngestResult load_panel(const std::filesystem::path& path, const IngestOptions& opts) {
    if (opts.min_year < 1900) throw Error("min_year must be >= 1900");

    std::ifstream in(path);
    if (!in) throw UnreadableFile("cannot open " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw SchemaMismatch("empty file: " + path.string());

    auto names = split_csv_line(header);
    for (auto& n : names) n = trim(n);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < names.size(); ++i) col[names[i]] = i;
    for (const auto& required : kRequiredColumns)
        if (!col.count(required))
            throw SchemaMismatch("missing required column '" + required + "' in " + path.string());

    IngestReport report;
    report.source = path.string();
    report.min_year = opts.min_year;

    std::vector<DmuYearRecord> kept;
    std::set<std::pair<std::string, int>> seen;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.total_rows;
        auto fields = split_csv_line(line);
        auto field = [&](const std::string& name) -> std::string {
            std::size_t idx = col.at(name);
            return idx < fields.size() ? trim(fields[idx]) : std::string();
        };

        DmuYearRecord rec;
        std::string reason;
        try {
            if (fields.size() < names.size())
                throw Error("row has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(names.size()));
            rec.dmu.code = field("ansp_code");
            rec.dmu.display_name = field("ansp_name");
            rec.year = parse_int(field("year"), "year");
            rec.atco_hours = parse_number(field("atco_hours"), "atco_hours");
            rec.non_atco_share = parse_number(field("non_atco_share"), "non_atco_share");
            rec.acc_count = parse_int(field("acc_count"), "acc_count");
            rec.tower_count = parse_int(field("tower_count"), "tower_count");
            rec.flight_hours = parse_number(field("flight_hours"), "flight_hours");
            rec.airport_movements = parse_number(field("airport_movements"), "airport_movements");
            if (auto s = field("er_unit_cost"); !s.empty())
                rec.er_unit_cost = parse_number(s, "er_unit_cost");
            if (auto s = field("tnl_unit_cost"); !s.empty())
                rec.tnl_unit_cost = parse_number(s, "tnl_unit_cost");
        } catch (const Error& e) {
            reason = e.what();
        }

        if (reason.empty() && rec.year < opts.min_year) {
            report.dropped.push_back({line_no, rec.dmu.code, rec.year,
                                      "year " + std::to_string(rec.year) + " before min_year " +
                                          std::to_string(opts.min_year)});
            continue;
        }
        if (reason.empty()) {
            auto violations = validate_record(rec);
            if (!violations.empty()) {
                std::ostringstream os;
                for (std::size_t i = 0; i < violations.size(); ++i)
                    os << (i ? "; " : "") << violations[i];
                reason = os.str();
            }
        }
        if (reason.empty() && !seen.insert({rec.dmu.code, rec.year}).second)
            reason = "duplicate (dmu, year) row";

        if (!reason.empty()) {
            if (opts.strict)
                throw SchemaMismatch("line " + std::to_string(line_no) + ": " + reason);
            report.dropped.push_back({line_no, rec.dmu.code, rec.year, reason});
            continue;
        }
        kept.push_back(std::move(rec));
    }

    if (!opts.drop_invalid) {
        // Year filtering and duplicates are routine; everything else fails the load.
        for (const auto& d : report.dropped) {
            bool routine = d.reason.rfind("year ", 0) == 0 || d.reason == "duplicate (dmu, year) row";
            if (!routine)
                throw SchemaMismatch("line " + std::to_string(d.line) + ": " + d.reason);
        }
    }

    if (kept.empty())
        throw EmptyPanel("no records survive filtering in " + path.string());

    report.kept_rows = kept.size();
    for (const auto& rec : kept) report.dmu_count_by_year[rec.year] += 1;

    IngestResult result{Panel::from_records(std::move(kept)), std::move(report)};
    return result;
}

std::string IngestReport::to_json() const {
    nlohmann::ordered_json j;
    j["source"] = source;
    j["min_year"] = min_year;
    j["total_rows"] = total_rows;
    j["kept_rows"] = kept_rows;
    j["dropped"] = nlohmann::ordered_json::array();
    for (const auto& d : dropped)
        j["dropped"].push_back({{"line", d.line}, {"dmu", d.dmu_code}, {"year", d.year}, {"reason", d.reason}});
    nlohmann::ordered_json counts;
    for (const auto& [year, count] : dmu_count_by_year) counts[std::to_string(year)] = count;
    j["dmu_count_by_year"] = counts;
    return j.dump(2);
}

std::vector<IndicatorStats> descriptive_stats(const Panel& panel, int year) {
    if (!panel.has_year(year)) throw YearAbsent("year " + std::to_string(year) + " not in panel");

    std::vector<std::pair<std::string, std::vector<double>>> columns = {
        {"atco_hours", {}},   {"non_atco_share", {}},    {"acc_count", {}},    {"tower_count", {}},
        {"flight_hours", {}}, {"airport_movements", {}}, {"er_unit_cost", {}}, {"tnl_unit_cost", {}},
    };
    for (const auto& rec : panel.records()) {
        if (rec.year != year) continue;
        columns[0].second.push_back(rec.atco_hours);
        columns[1].second.push_back(rec.non_atco_share);
        columns[2].second.push_back(rec.acc_count);
        columns[3].second.push_back(rec.tower_count);
        columns[4].second.push_back(rec.flight_hours);
        columns[5].second.push_back(rec.airport_movements);
        if (rec.er_unit_cost) columns[6].second.push_back(*rec.er_unit_cost);
        if (rec.tnl_unit_cost) columns[7].second.push_back(*rec.tnl_unit_cost);
    }

    std::vector<IndicatorStats> out;
    for (auto& [name, values] : columns) {
        if (values.empty()) continue;  // cost columns may be entirely absent
        std::sort(values.begin(), values.end());
        IndicatorStats s;
        s.indicator = name;
        s.min = values.front();
        s.median = stats::quantile_sorted(values, 0.5);
        s.q3 = stats::quantile_sorted(values, 0.75);
        s.max = values.back();
        s.stddev = stats::sample_stddev(values);
        s.degenerate = values.size() < 2;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace dea
