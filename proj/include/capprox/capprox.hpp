#pragma once

#include "capprox/approximator.hpp"
#include "capprox/badchar_search.hpp"
#include "capprox/distinct_estimator.hpp"
#include "capprox/error.hpp"
#include "capprox/error_analysis.hpp"
#include "capprox/experiment.hpp"
#include "capprox/hash_family.hpp"
#include "capprox/lattice.hpp"
#include "capprox/serialization.hpp"
#include "capprox/utf8.hpp"
