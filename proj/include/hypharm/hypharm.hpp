#pragma once

#include "hypharm/closed_forms.hpp"
#include "hypharm/csv.hpp"
#include "hypharm/error.hpp"
#include "hypharm/foliation.hpp"
#include "hypharm/grid.hpp"
#include "hypharm/harmonic_maps.hpp"
#include "hypharm/hyperbolic.hpp"
#include "hypharm/quad_diff.hpp"
#include "hypharm/quadrature.hpp"
#include "hypharm/sym2.hpp"
#include "hypharm/wan_solver.hpp"
