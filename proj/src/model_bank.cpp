#include "dea/model_bank.hpp"

#include <cmath>
#include <json.hpp>
#include <optional>

#include "dea/errors.hpp"

namespace dea {

ModelSpec builtin_model(const std::string& name) {
    ModelSpec spec;
    spec.name = name;
    if (name == "1A" || name == "1B") {
        spec.input_factors = {Factor::AtcoHours, Factor::NonAtcoShare, Factor::Ciu};
        spec.output_factors = {Factor::FlightHours, Factor::AirportMovements};
    } else if (name == "2A" || name == "2B") {
        spec.input_factors = {Factor::AtcoHours, Factor::NonAtcoShare, Factor::Ciu};
        spec.output_factors = {Factor::Cfh};
    } else if (name == "3A" || name == "3B") {
        spec.input_factors = {Factor::AtcoHours, Factor::NonAtcoShare, Factor::CiuIndividual};
        spec.output_factors = {Factor::CfhIndividual};
    } else {
        throw UnknownModel("unknown model name: " + name);
    }
    if (name.back() == 'B') spec.excluded_dmus = {"MUAC"};
    return spec;
}

std::vector<ModelSpec> builtin_models() {
    std::vector<ModelSpec> specs;
    for (const char* name : {"1A", "1B", "2A", "2B", "3A", "3B"})
        specs.push_back(builtin_model(name));
    return specs;
}

ModelSpec model_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid model JSON: ") + e.what());
    }
    ModelSpec spec;
    try {
        spec.name = j.at("name").get<std::string>();
        for (const auto& f : j.at("inputs")) spec.input_factors.push_back(factor_from_string(f.get<std::string>()));
        for (const auto& f : j.at("outputs")) spec.output_factors.push_back(factor_from_string(f.get<std::string>()));
        if (j.contains("excluded_dmus"))
            for (const auto& d : j["excluded_dmus"]) spec.excluded_dmus.insert(d.get<std::string>());
        if (j.contains("rts")) spec.rts = rts_from_string(j["rts"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid model JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

namespace {

// Per-DMU weight for a composite term. The weighted component being zero
// makes the weight irrelevant, so en-route-only units need no unit costs.
std::optional<double> composite_weight(const DmuYearRecord& rec, bool individual,
                                       const WeightScheme& scheme, double weighted_component,
                                       std::string* why_missing) {
    if (!individual) return scheme.w_pan;
    if (weighted_component == 0.0) return scheme.w_pan;  // multiplies zero; value is moot
    if (!rec.er_unit_cost || !rec.tnl_unit_cost) {
        *why_missing = "missing unit costs";
        return std::nullopt;
    }
    return individual_weight(*rec.er_unit_cost, *rec.tnl_unit_cost);
}

std::optional<double> factor_value(const DmuYearRecord& rec, Factor f, const WeightScheme& scheme,
                                   std::string* why_missing) {
    const bool scheme_individual = scheme.kind == WeightScheme::Kind::Individual;
    switch (f) {
        case Factor::AtcoHours: return rec.atco_hours;
        case Factor::NonAtcoShare: return rec.non_atco_share;
        case Factor::FlightHours: return rec.flight_hours;
        case Factor::AirportMovements: return rec.airport_movements;
        case Factor::Cfh:
        case Factor::CfhIndividual: {
            bool individual = f == Factor::CfhIndividual || scheme_individual;
            auto w = composite_weight(rec, individual, scheme, rec.airport_movements, why_missing);
            if (!w) return std::nullopt;
            return cfh(rec.flight_hours, rec.airport_movements, *w);
        }
        case Factor::Ciu:
        case Factor::CiuIndividual: {
            bool individual = f == Factor::CiuIndividual || scheme_individual;
            auto w = composite_weight(rec, individual, scheme, rec.tower_count, why_missing);
            if (!w) return std::nullopt;
            return ciu(rec.acc_count, rec.tower_count, *w);
        }
    }
    return std::nullopt;
}

}  // namespace

FactorMatrix materialize(const Panel& panel, const ModelSpec& spec, int year,
                         const WeightScheme& weights, MaterializeReport* report, bool strict) {
    spec.validate();
    if (!panel.has_year(year)) throw YearAbsent("year " + std::to_string(year) + " not in panel");

    FactorMatrix fm;
    for (Factor f : spec.input_factors) fm.input_names.push_back(to_string(f));
    for (Factor f : spec.output_factors) fm.output_names.push_back(to_string(f));

    auto drop = [&](const std::string& code, const std::string& factor, const std::string& reason) {
        if (strict)
            throw MissingFactorData(code + "/" + std::to_string(year) + " " + factor + ": " + reason);
        if (report) report->dropped.push_back({code, factor, reason});
    };

    for (const DmuId& dmu : panel.dmus()) {  // dmus() is sorted by code
        if (spec.excluded_dmus.count(dmu.code)) continue;
        const DmuYearRecord* rec = panel.find(dmu.code, year);
        if (!rec) continue;  // DMU not observed that year

        std::vector<double> in_row, out_row;
        bool usable = true;
        for (Factor f : spec.input_factors) {
            std::string why;
            auto v = factor_value(*rec, f, weights, &why);
            if (!v) {
                drop(dmu.code, to_string(f), why);
                usable = false;
                break;
            }
            if (*v <= 0.0) {
                drop(dmu.code, to_string(f), "non-positive input value");
                usable = false;
                break;
            }
            in_row.push_back(*v);
        }
        if (!usable) continue;
        bool any_output = false;
        for (Factor f : spec.output_factors) {
            std::string why;
            auto v = factor_value(*rec, f, weights, &why);
            if (!v) {
                drop(dmu.code, to_string(f), why);
                usable = false;
                break;
            }
            any_output = any_output || *v > 0.0;
            out_row.push_back(*v);
        }
        if (!usable) continue;
        if (!any_output) {
            drop(dmu.code, "outputs", "all selected outputs zero");
            continue;
        }
        fm.dmu_order.push_back(dmu);
        fm.inputs.push_back(std::move(in_row));
        fm.outputs.push_back(std::move(out_row));
    }
    return fm;
}

}  // namespace dea
