#pragma once

// Umbrella header.

#include "weyl/error.hpp"
#include "weyl/expr.hpp"
#include "weyl/angle_law.hpp"
#include "weyl/scalar_field.hpp"
#include "weyl/types.hpp"
#include "weyl/spinor.hpp"
#include "weyl/potentials.hpp"
#include "weyl/observables.hpp"
#include "weyl/dynamics.hpp"
#include "weyl/scenario.hpp"
#include "weyl/report.hpp"
#include "weyl/commands.hpp"
