#pragma once

#include "hsl/cluster_io.hpp"
#include "hsl/conformal_maps.hpp"
#include "hsl/errors.hpp"
#include "hsl/io.hpp"
#include "hsl/lattice.hpp"
#include "hsl/moments.hpp"
#include "hsl/quadrature.hpp"
#include "hsl/rng.hpp"
#include "hsl/shape_compare.hpp"
#include "hsl/special_functions.hpp"
