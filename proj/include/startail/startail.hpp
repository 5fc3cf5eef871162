#pragma once

#include "startail/common.hpp"
#include "startail/graph.hpp"
#include "startail/oracles.hpp"
#include "startail/bounds.hpp"
#include "startail/peeling.hpp"
#include "startail/constructions.hpp"
#include "startail/iidsum.hpp"
#include "startail/montecarlo.hpp"
