#pragma once

#include "vpatch/core.hpp"
#include "vpatch/trig_curve.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/green.hpp"
#include "vpatch/torsion.hpp"
#include "vpatch/functionals.hpp"
#include "vpatch/vstate.hpp"
#include "vpatch/evolve.hpp"
#include "vpatch/io.hpp"
#include "vpatch/certify.hpp"
#include "vpatch/selftest.hpp"
