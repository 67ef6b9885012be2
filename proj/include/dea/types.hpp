#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dea {

/// Identity of a decision-making unit (e.g. one service provider).
/// The code is the unique key; the display name is informational.
struct DmuId {
    std::string code;
    std::string display_name;

    friend bool operator==(const DmuId& a, const DmuId& b) { return a.code == b.code; }
    friend bool operator<(const DmuId& a, const DmuId& b) { return a.code < b.code; }
};

/// One provider-year observation of operational inputs and outputs.
/// Unit costs are optional and only ever used to derive composite weights,
/// never as DEA factors themselves.
struct DmuYearRecord {
    DmuId dmu;
    int year = 0;
    double atco_hours = 0.0;
    double non_atco_share = 0.0;  // share of non-controller staff, in [0,1]
    int acc_count = 0;
    int tower_count = 0;
    double flight_hours = 0.0;
    double airport_movements = 0.0;
    std::optional<double> er_unit_cost;   // currency per flight hour
    std::optional<double> tnl_unit_cost;  // currency per airport movement
};

/// Returns the list of invariant violations for a record; empty means valid.
/// Violations are data, not failures: each entry names the field and rule.
std::vector<std::string> validate_record(const DmuYearRecord& rec);

/// Immutable panel of validated records, at most one per (dmu, year).
class Panel {
  public:
    /// Builds a panel, enforcing record validity and (dmu, year) uniqueness.
    /// Throws Error listing every violation found.
    static Panel from_records(std::vector<DmuYearRecord> records);

    const std::vector<DmuYearRecord>& records() const { return records_; }
    const std::vector<int>& years() const { return years_; }
    const std::vector<DmuId>& dmus() const { return dmus_; }

    bool has_year(int year) const;
    /// Record for (code, year), or nullptr when that cell is absent.
    const DmuYearRecord* find(std::string_view code, int year) const;

  private:
    Panel() = default;
    std::vector<DmuYearRecord> records_;
    std::vector<int> years_;                                     // sorted, unique
    std::vector<DmuId> dmus_;                                    // sorted by code
    std::map<std::pair<std::string, int>, std::size_t> index_;  // (code, year) -> records_ index
};

enum class Rts { Crs, Vrs };
enum class Method { Radial, SuperEfficiency, Sbm, Bootstrap };

std::string to_string(Rts rts);
std::string to_string(Method m);
Rts rts_from_string(std::string_view s);        // "crs" | "vrs"
Method method_from_string(std::string_view s);  // "radial" | "super" | "sbm" | "bootstrap"

/// Factor vocabulary for model specifications. Monetary unit costs are not
/// selectable: they only enter through the individually weighted composites.
enum class Factor {
    AtcoHours,
    NonAtcoShare,
    Ciu,
    CiuIndividual,
    FlightHours,
    AirportMovements,
    Cfh,
    CfhIndividual,
};

std::string to_string(Factor f);
Factor factor_from_string(std::string_view s);

/// A named selection of input/output factors, exclusions and an RTS default.
struct ModelSpec {
    std::string name;
    std::vector<Factor> input_factors;
    std::vector<Factor> output_factors;
    std::set<std::string> excluded_dmus;  // by DMU code
    Rts rts = Rts::Crs;

    /// True when the model carries more than four factors in total.
    /// Execution is not blocked; the flag is surfaced in reports.
    bool factor_warning() const { return input_factors.size() + output_factors.size() > 4; }

    /// Throws Error unless factor lists are non-empty and disjoint.
    void validate() const;
};

/// One year of a model materialized against a panel: row j holds the selected
/// input/output values of dmu_order[j].
struct FactorMatrix {
    std::vector<DmuId> dmu_order;
    std::vector<std::vector<double>> inputs;   // [dmu][input factor]
    std::vector<std::vector<double>> outputs;  // [dmu][output factor]
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;

    std::size_t n_dmus() const { return dmu_order.size(); }
    std::size_t n_inputs() const { return input_names.size(); }
    std::size_t n_outputs() const { return output_names.size(); }

    /// Checks shape and positivity invariants (every row must have at least
    /// one strictly positive input and output entry). min_dmus is 1 for
    /// self-referencing methods and 2 for super-efficiency.
    void validate(std::size_t min_dmus = 2) const;
};

enum class SolveStatus { Optimal, Infeasible };

/// Efficiency result for one DMU under one model/year/method/RTS combination.
struct DeaResult {
    DmuId dmu;
    double score = 0.0;  // theta or rho; NaN when status != Optimal
    std::map<std::string, double> lambdas;  // peer weights by DMU code
    std::vector<double> input_slacks;
    std::vector<double> output_slacks;
    SolveStatus status = SolveStatus::Optimal;
};

}  // namespace dea
