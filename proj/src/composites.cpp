#include "dea/composites.hpp"

#include <cmath>
#include <string>

#include "dea/errors.hpp"

namespace dea {

namespace {

void require_nonneg(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0))
        throw NegativeInput(std::string(name) + " must be a non-negative finite value");
}

void require_positive_weight(double w) {
    if (!(std::isfinite(w) && w > 0.0)) throw NegativeInput("weight must be positive");
}

}  // namespace

double cfh(double flight_hours, double airport_movements, double w) {
    require_nonneg(flight_hours, "flight_hours");
    require_nonneg(airport_movements, "airport_movements");
    require_positive_weight(w);
    return flight_hours + w * airport_movements;
}

double individual_weight(double er_unit_cost, double tnl_unit_cost) {
    if (!(std::isfinite(er_unit_cost) && er_unit_cost > 0.0) ||
        !(std::isfinite(tnl_unit_cost) && tnl_unit_cost > 0.0))
        throw MissingCosts("individual weight needs positive en-route and terminal unit costs");
    return tnl_unit_cost / er_unit_cost;
}

double ciu(double acc_count, double tower_count, double w) {
    require_nonneg(acc_count, "acc_count");
    require_nonneg(tower_count, "tower_count");
    require_positive_weight(w);
    return acc_count + w * tower_count;
}

}  // namespace dea
