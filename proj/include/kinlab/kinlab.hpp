#pragma once

/// \file kinlab.hpp
/// Convenience header pulling in the whole library: grids and weighted
/// norms, banded spatial operators, one-step kinetic schemes, the Fourier
/// symbol analyzer, the nonlocal (Volterra) cross-check solver, nonlinear
/// and two-species extensions, and the experiment harness.

#include "kinlab/grid.hpp"
#include "kinlab/linsolve.hpp"
#include "kinlab/mat2.hpp"
#include "kinlab/scheme.hpp"
#include "kinlab/operators.hpp"
#include "kinlab/stepper.hpp"
#include "kinlab/vonneumann.hpp"
#include "kinlab/volterra.hpp"
#include "kinlab/extensions.hpp"
#include "kinlab/experiments.hpp"
