#include "dea/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dea/errors.hpp"

namespace dea {

namespace {

bool nonneg_finite(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::vector<std::string> validate_record(const DmuYearRecord& rec) {
    std::vector<std::string> violations;
    if (rec.dmu.code.empty()) violations.push_back("dmu code empty");
    if (!std::isfinite(rec.atco_hours)) violations.push_back("atco_hours not finite");
    else if (rec.atco_hours < 0.0) violations.push_back("atco_hours negative");
    if (!std::isfinite(rec.non_atco_share)) violations.push_back("non_atco_share not finite");
    else if (rec.non_atco_share < 0.0 || rec.non_atco_share > 1.0)
        violations.push_back("non_atco_share outside [0,1]");
    if (rec.acc_count < 0) violations.push_back("acc_count negative");
    if (rec.tower_count < 0) violations.push_back("tower_count negative");
    if (!nonneg_finite(rec.flight_hours))
        violations.push_back(std::isfinite(rec.flight_hours) ? "flight_hours negative"
                                                             : "flight_hours not finite");
    if (!nonneg_finite(rec.airport_movements))
        violations.push_back(std::isfinite(rec.airport_movements) ? "airport_movements negative"
                                                                  : "airport_movements not finite");
    if (rec.er_unit_cost.has_value() != rec.tnl_unit_cost.has_value())
        violations.push_back("unit costs must be paired");
    if (rec.er_unit_cost && !(std::isfinite(*rec.er_unit_cost) && *rec.er_unit_cost > 0.0))
        violations.push_back("er_unit_cost not positive");
    if (rec.tnl_unit_cost && !(std::isfinite(*rec.tnl_unit_cost) && *rec.tnl_unit_cost > 0.0))
        violations.push_back("tnl_unit_cost not positive");
    return violations;
}

Panel Panel::from_records(std::vector<DmuYearRecord> records) {
    if (records.empty()) throw EmptyPanel("panel has no records");
    Panel p;
    std::ostringstream problems;
    bool bad = false;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        for (const auto& v : validate_record(rec)) {
            problems << rec.dmu.code << "/" << rec.year << ": " << v << "\n";
            bad = true;
        }
        auto key = std::make_pair(rec.dmu.code, rec.year);
        if (p.index_.count(key)) {
            problems << rec.dmu.code << "/" << rec.year << ": duplicate record\n";
            bad = true;
        }
        p.index_.emplace(std::move(key), i);
    }
    if (bad) throw Error("invalid panel:\n" + problems.str());

    p.records_ = std::move(records);
    std::set<int> years;
    std::map<std::string, DmuId> dmus;
    for (const auto& rec : p.records_) {
        years.insert(rec.year);
        dmus.emplace(rec.dmu.code, rec.dmu);  // first display name wins
    }
    p.years_.assign(years.begin(), years.end());
    for (auto& [code, id] : dmus) p.dmus_.push_back(id);
    return p;
}

bool Panel::has_year(int year) const {
    return std::binary_search(years_.begin(), years_.end(), year);
}

const DmuYearRecord* Panel::find(std::string_view code, int year) const {
    auto it = index_.find(std::make_pair(std::string(code), year));
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::string to_string(Rts rts) { return rts == Rts::Crs ? "crs" : "vrs"; }

std::string to_string(Method m) {
    switch (m) {
        case Method::Radial: return "radial";
        case Method::SuperEfficiency: return "super";
        case Method::Sbm: return "sbm";
        case Method::Bootstrap: return "bootstrap";
    }
    return "?";
}

Rts rts_from_string(std::string_view s) {
    if (s == "crs") return Rts::Crs;
    if (s == "vrs") return Rts::Vrs;
    throw Error("unknown returns-to-scale: " + std::string(s));
}

Method method_from_string(std::string_view s) {
    if (s == "radial") return Method::Radial;
    if (s == "super") return Method::SuperEfficiency;
    if (s == "sbm") return Method::Sbm;
    if (s == "bootstrap") return Method::Bootstrap;
    throw Error("unknown method: " + std::string(s));
}

std::string to_string(Factor f) {
    switch (f) {
        case Factor::AtcoHours: return "atco_hours";
        case Factor::NonAtcoShare: return "non_atco_share";
        case Factor::Ciu: return "ciu";
        case Factor::CiuIndividual: return "ciu_i";
        case Factor::FlightHours: return "flight_hours";
        case Factor::AirportMovements: return "airport_movements";
        case Factor::Cfh: return "cfh";
        case Factor::CfhIndividual: return "cfh_i";
    }
    return "?";
}

Factor factor_from_string(std::string_view s) {
    if (s == "atco_hours") return Factor::AtcoHours;
    if (s == "non_atco_share") return Factor::NonAtcoShare;
    if (s == "ciu") return Factor::Ciu;
    if (s == "ciu_i") return Factor::CiuIndividual;
    if (s == "flight_hours") return Factor::FlightHours;
    if (s == "airport_movements") return Factor::AirportMovements;
    if (s == "cfh") return Factor::Cfh;
    if (s == "cfh_i") return Factor::CfhIndividual;
    throw Error("unknown factor: " + std::string(s));
}

void ModelSpec::validate() const {
    if (input_factors.empty()) throw Error("model " + name + ": no input factors");
    if (output_factors.empty()) throw Error("model " + name + ": no output factors");
    for (Factor in : input_factors)
        for (Factor out : output_factors)
            if (in == out)
                throw Error("model " + name + ": factor " + to_string(in) +
                            " selected as both input and output");
}

void FactorMatrix::validate(std::size_t min_dmus) const {
    if (n_inputs() < 1) throw Error("factor matrix has no inputs");
    if (n_outputs() < 1) throw Error("factor matrix has no outputs");
    if (n_dmus() < min_dmus)
        throw Error("factor matrix has " + std::to_string(n_dmus()) + " DMUs, need at least " +
                    std::to_string(min_dmus));
    if (inputs.size() != n_dmus() || outputs.size() != n_dmus())
        throw Error("factor matrix row count mismatch");
    for (std::size_t j = 0; j < n_dmus(); ++j) {
        if (inputs[j].size() != n_inputs() || outputs[j].size() != n_outputs())
            throw Error("factor matrix column count mismatch at row " + std::to_string(j));
        auto positive = [](double v) { return v > 0.0; };
        for (double v : inputs[j])
            if (!std::isfinite(v) || v < 0.0)
                throw Error("negative or non-finite input for " + dmu_order[j].code);
        for (double v : outputs[j])
            if (!std::isfinite(v) || v < 0.0)
                throw Error("negative or non-finite output for " + dmu_order[j].code);
        if (std::none_of(inputs[j].begin(), inputs[j].end(), positive))
            throw Error("all inputs zero for " + dmu_order[j].code);
        if (std::none_of(outputs[j].begin(), outputs[j].end(), positive))
            throw Error("all outputs zero for " + dmu_order[j].code);
    }
}

}  // namespace dea
