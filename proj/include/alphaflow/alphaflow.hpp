#pragma once

// Umbrella header.

#include "alphaflow/branch_check.hpp"
#include "alphaflow/dynamics.hpp"
#include "alphaflow/errors.hpp"
#include "alphaflow/fixtures.hpp"
#include "alphaflow/geometry.hpp"
#include "alphaflow/io.hpp"
#include "alphaflow/linalg.hpp"
#include "alphaflow/packing.hpp"
#include "alphaflow/parallel.hpp"
#include "alphaflow/potential.hpp"
#include "alphaflow/random.hpp"
#include "alphaflow/solve.hpp"
#include "alphaflow/surface.hpp"
#include "alphaflow/surface_io.hpp"
#include "alphaflow/verify.hpp"
