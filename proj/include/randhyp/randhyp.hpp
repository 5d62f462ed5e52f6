#pragma once

#include "log_real.hpp"
#include "special.hpp"
#include "scalar_search.hpp"
#include "random.hpp"
#include "parallel.hpp"
#include "polycore.hpp"
#include "pairs.hpp"
#include "constants.hpp"
#include "transversality.hpp"
#include "ensembles.hpp"
#include "roots.hpp"
#include "zeroset.hpp"
#include "stability.hpp"
#include "lab.hpp"
