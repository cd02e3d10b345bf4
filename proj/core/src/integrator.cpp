#include "morpho/integrator.hpp"

#include <cmath>

#include "morpho/errors.hpp"

namespace morpho {

void IntegratorConfig::validate() const {
  if (!(plant_step > 0.0)) {
    throw ValidationError("integrator.plant_step", "must be > 0");
  }
  if (!(control_period > 0.0)) {
    throw ValidationError("integrator.control_period", "must be > 0");
  }
  if (prediction_substeps < 1) {
    throw ValidationError("integrator.prediction_substeps", "must be >= 1");
  }
  const double ratio = control_period / plant_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-12 * ratio) {
    throw ValidationError("integrator.control_period",
                          "must be an integer multiple of plant_step");
  }
}

}  // namespace morpho
