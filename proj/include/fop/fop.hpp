#pragma once

// Umbrella header.

#include "fop/common.hpp"
#include "fop/random.hpp"
#include "fop/group.hpp"
#include "fop/rep.hpp"
#include "fop/polynomial.hpp"
#include "fop/equivariant.hpp"
#include "fop/chart.hpp"
#include "fop/strata.hpp"
#include "fop/psolve.hpp"
#include "fop/euler.hpp"
#include "fop/io.hpp"
#include "fop/acceptance.hpp"
