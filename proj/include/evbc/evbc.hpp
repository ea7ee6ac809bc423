#pragma once

// Numerical laboratory for a one-dimensional eigenvalue problem whose
// boundary conditions contain the eigenvalue itself, its finite-difference
// discretization, and the closed-form analysis of piecewise-constant
// coefficient profiles.

#include "evbc/analytic.hpp"
#include "evbc/assemble.hpp"
#include "evbc/config.hpp"
#include "evbc/csv.hpp"
#include "evbc/eigen.hpp"
#include "evbc/errors.hpp"
#include "evbc/experiments.hpp"
#include "evbc/grid.hpp"
#include "evbc/profile.hpp"
#include "evbc/svg.hpp"
