#pragma once

#include "hdit/centering.hpp"
#include "hdit/csv.hpp"
#include "hdit/limit_dists.hpp"
#include "hdit/lrt.hpp"
#include "hdit/null_oracle.hpp"
#include "hdit/partition.hpp"
#include "hdit/rng.hpp"
#include "hdit/simulate.hpp"
#include "hdit/specfun.hpp"
#include "hdit/statistics.hpp"
