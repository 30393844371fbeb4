#pragma once
// Umbrella header: the whole library in one include.

#include "herdlab/analysis.hpp"
#include "herdlab/cli.hpp"
#include "herdlab/csv.hpp"
#include "herdlab/dynamics.hpp"
#include "herdlab/ensemble.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/g_function.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/report.hpp"
#include "herdlab/rng.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/scenario.hpp"
#include "herdlab/time_variant.hpp"
#include "herdlab/verify.hpp"
#include "herdlab/version.hpp"
#include "herdlab/weight_matrix.hpp"
