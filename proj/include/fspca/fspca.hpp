#pragma once

// Row-sparse principal subspace estimation: solvers, exhaustive oracle,
// synthetic covariance generators, performance measures, and a seeded
// benchmark harness.

#include "fspca/bench.hpp"
#include "fspca/csv.hpp"
#include "fspca/error.hpp"
#include "fspca/estimate.hpp"
#include "fspca/matrix.hpp"
#include "fspca/metrics.hpp"
#include "fspca/oracle.hpp"
#include "fspca/rng.hpp"
#include "fspca/solver.hpp"
#include "fspca/support.hpp"
#include "fspca/synth.hpp"
