#pragma once

#include "dispersl/dispersive_operator.hpp"
#include "dispersl/elliptic.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/flux.hpp"
#include "dispersl/interpolation.hpp"
#include "dispersl/norms.hpp"
#include "dispersl/quadrature.hpp"
#include "dispersl/sl_stepper.hpp"
#include "dispersl/torus_grid.hpp"
#include "dispersl/trig_polynomial.hpp"
#include "dispersl/harness/config.hpp"
#include "dispersl/harness/csv.hpp"
#include "dispersl/harness/experiments.hpp"
#include "dispersl/harness/verify.hpp"
