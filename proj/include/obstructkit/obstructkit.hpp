#pragma once

#include "obstructkit/audit.hpp"
#include "obstructkit/error.hpp"
#include "obstructkit/eta.hpp"
#include "obstructkit/homology.hpp"
#include "obstructkit/io.hpp"
#include "obstructkit/matcore.hpp"
#include "obstructkit/projops.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/random.hpp"
#include "obstructkit/rng.hpp"
#include "obstructkit/winding.hpp"
#include "obstructkit/words.hpp"
