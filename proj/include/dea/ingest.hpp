#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dea/types.hpp"

namespace dea {

struct IngestOptions {
    int min_year = 2008;       // rows from earlier years are filtered out
    bool drop_invalid = true;  // false: any validation violation fails the whole load
    bool strict = false;       // fail on the first violation instead of collecting
};

struct DroppedRow {
    std::size_t line;  // 1-based line number in the source file
    std::string dmu_code;
    int year = 0;
    std::string reason;
};

struct IngestReport {
    std::string source;
    int min_year = 0;
    std::size_t total_rows = 0;  // data rows in the file, header excluded
    std::size_t kept_rows = 0;
    std::vector<DroppedRow> dropped;
    std::map<int, int> dmu_count_by_year;

    std::string to_json() const;
};

struct IngestResult {
    Panel panel;
    IngestReport report;
};

/// Loads the panel CSV (schema: ansp_code,ansp_name,year,atco_hours,
/// non_atco_share,acc_count,tower_count,flight_hours,airport_movements,
/// er_unit_cost,tnl_unit_cost). Columns are located by header name; the two
/// unit-cost fields may be empty. Rows below min_year, duplicate (dmu, year)
/// rows and rows failing validation are dropped and reported.
/// Throws UnreadableFile, SchemaMismatch, EmptyPanel.
IngestResult load_panel(const std::filesystem::path& path, const IngestOptions& opts = {});

struct IndicatorStats {
    std::string indicator;
    double min = 0, median = 0, q3 = 0, max = 0, stddev = 0;
    bool degenerate = false;  // single observation; stddev reported as 0
};

/// Per-indicator order statistics for one year of the panel (quartiles by
/// linear interpolation, sample standard deviation). Throws YearAbsent.
std::vector<IndicatorStats> descriptive_stats(const Panel& panel, int year);

}  // namespace dea
