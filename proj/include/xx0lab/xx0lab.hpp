#pragma once

// Umbrella header for the whole library.

#include "xx0lab/correlations.hpp"
#include "xx0lab/equilibrium.hpp"
#include "xx0lab/io.hpp"
#include "xx0lab/pauli.hpp"
#include "xx0lab/qec.hpp"
#include "xx0lab/quadrature.hpp"
#include "xx0lab/sector.hpp"
#include "xx0lab/thermo.hpp"
#include "xx0lab/xx0.hpp"
