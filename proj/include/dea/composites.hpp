#pragma once

namespace dea {

/// How composite factors are weighted: one pan-European weight for every
/// DMU, or a per-DMU weight derived from its own unit-cost ratio.
struct WeightScheme {
    enum class Kind { PanEuropean, Individual };
    Kind kind = Kind::PanEuropean;
    double w_pan = 0.27;
};

/// Composite flight hours: flight_hours + w * airport_movements.
double cfh(double flight_hours, double airport_movements, double w);

/// Per-DMU composite weight: terminal unit cost over en-route unit cost.
double individual_weight(double er_unit_cost, double tnl_unit_cost);

/// Composite infrastructure units: acc_count + w * tower_count.
double ciu(double acc_count, double tower_count, double w);

}  // namespace dea
