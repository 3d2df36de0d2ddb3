#pragma once

#include "hackability/diagrams.hpp"
#include "hackability/environments.hpp"
#include "hackability/errors.hpp"
#include "hackability/io.hpp"
#include "hackability/linalg.hpp"
#include "hackability/lp.hpp"
#include "hackability/mdp.hpp"
#include "hackability/ordering.hpp"
#include "hackability/rational.hpp"
#include "hackability/representability.hpp"
#include "hackability/rng.hpp"
#include "hackability/witness_search.hpp"
