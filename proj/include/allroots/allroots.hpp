#pragma once

#include "common.hpp"
#include "experiment.hpp"
#include "gaussian.hpp"
#include "io.hpp"
#include "newton.hpp"
#include "orbit_ring.hpp"
#include "parallel.hpp"
#include "poly_family.hpp"
#include "power_sums.hpp"
#include "recover.hpp"
#include "root_set.hpp"
#include "scaled_complex.hpp"
