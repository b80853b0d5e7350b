#pragma once

#include "sqfv/common.hpp"
#include "sqfv/density.hpp"
#include "sqfv/experiments.hpp"
#include "sqfv/factor.hpp"
#include "sqfv/modular.hpp"
#include "sqfv/parallel.hpp"
#include "sqfv/polynomial.hpp"
#include "sqfv/primes.hpp"
#include "sqfv/r_invariant.hpp"
#include "sqfv/rng.hpp"
#include "sqfv/roots_mod.hpp"
#include "sqfv/survey.hpp"
