#ifndef OPTDES_OPTDES_HPP
#define OPTDES_OPTDES_HPP

#include "optdes/bench.hpp"
#include "optdes/criteria.hpp"
#include "optdes/csv.hpp"
#include "optdes/design.hpp"
#include "optdes/design_space.hpp"
#include "optdes/errors.hpp"
#include "optdes/exchange.hpp"
#include "optdes/mvee.hpp"
#include "optdes/rng.hpp"
#include "optdes/solvers.hpp"
#include "optdes/state.hpp"

#endif  // OPTDES_OPTDES_HPP
