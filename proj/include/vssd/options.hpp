#pragma once

#include "vssd/functions.hpp"
#include "vssd/params.hpp"

namespace vssd {

/// Physics switches shared by the constraint solver and the dynamics.
struct ModelOptions {
  Direction direction = Direction::Discharge;
  StoichMode stoich_mode = StoichMode::Saturated;
  bool rate_corrections = false;   // rate-dependent activity factor
  bool rate_fallback = true;       // nearest-rate lookup allowed
  double lambda_shift = 0.0;       // explicit operator-shift bookkeeping
  RateCorrections rate_table = RateCorrections::defaults();
};

}  // namespace vssd
