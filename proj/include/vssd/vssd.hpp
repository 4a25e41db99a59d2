#pragma once

// Reduced-order electrochemical simulator for LFP half cells with variable
// solid-state diffusivity: eigenfunction-Galerkin particles, spline
// electrolyte and potential fields, Newton-solved potential constraints, and
// a fully dynamical reformulation with periodic constraint correction.

#include "vssd/config.hpp"
#include "vssd/constraint.hpp"
#include "vssd/csv.hpp"
#include "vssd/dynamics.hpp"
#include "vssd/errors.hpp"
#include "vssd/functions.hpp"
#include "vssd/gauss.hpp"
#include "vssd/observer.hpp"
#include "vssd/options.hpp"
#include "vssd/params.hpp"
#include "vssd/profile.hpp"
#include "vssd/radial.hpp"
#include "vssd/spatial.hpp"
#include "vssd/state.hpp"
#include "vssd/studies.hpp"
