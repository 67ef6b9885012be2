#pragma once

#include <string>
#include <vector>

#include "dea/composites.hpp"
#include "dea/types.hpp"

namespace dea {

/// Returns one of the six built-in models:
///   1A/1B: inputs {atco_hours, non_atco_share, ciu},
///          outputs {flight_hours, airport_movements}
///   2A/2B: same inputs, single output {cfh}
///   3A/3B: inputs {atco_hours, non_atco_share, ciu_i}, output {cfh_i}
/// B variants exclude the DMU coded "MUAC". Throws UnknownModel.
ModelSpec builtin_model(const std::string& name);

/// All six built-in models, in name order.
std::vector<ModelSpec> builtin_models();

/// Parses a custom model from JSON:
///   {"name": "...", "inputs": [factor...], "outputs": [factor...],
///    "excluded_dmus": [code...], "rts": "crs"|"vrs"}
/// Factor names come from the fixed vocabulary of dea::Factor.
ModelSpec model_from_json(const std::string& json_text);

struct MaterializeDrop {
    std::string dmu_code;
    std::string factor;
    std::string reason;
};

struct MaterializeReport {
    std::vector<MaterializeDrop> dropped;
};

/// Materializes one year of a model against the panel. Rows are ordered by
/// DMU code; excluded DMUs are absent. The generic cfh/ciu factors follow
/// the weight scheme (pan-European weight or per-DMU cost ratio); cfh_i and
/// ciu_i always use per-DMU cost ratios. DMUs whose selected factors cannot
/// be computed (missing unit costs where the weighted term is non-zero,
/// non-positive selected inputs, all-zero outputs) are dropped and reported,
/// or raise MissingFactorData in strict mode. Throws YearAbsent.
FactorMatrix materialize(const Panel& panel, const ModelSpec& spec, int year,
                         const WeightScheme& weights = {}, MaterializeReport* report = nullptr,
                         bool strict = false);

}  // namespace dea
