#pragma once

// Simulation and certification of cooperative multi-agent consensus and
// flocking under intermittent communication. Umbrella include.

#include "swarmcert/types.hpp"
#include "swarmcert/rng.hpp"
#include "swarmcert/kernel.hpp"
#include "swarmcert/schedule.hpp"
#include "swarmcert/dynamics.hpp"
#include "swarmcert/integrator.hpp"
#include "swarmcert/metrics.hpp"
#include "swarmcert/quadrature.hpp"
#include "swarmcert/theory.hpp"
#include "swarmcert/verify.hpp"
#include "swarmcert/io.hpp"
#include "swarmcert/config.hpp"
