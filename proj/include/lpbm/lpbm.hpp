#pragma once

#include "lpbm/core/error.hpp"
#include "lpbm/core/estimate.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/core/vector.hpp"
#include "lpbm/functionals/functional_spec.hpp"
#include "lpbm/functionals/steiner.hpp"
#include "lpbm/functionals/u_function.hpp"
#include "lpbm/functionals/wills.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/geometry/direction_grid.hpp"
#include "lpbm/geometry/hull.hpp"
#include "lpbm/geometry/indicator.hpp"
#include "lpbm/geometry/predicates.hpp"
#include "lpbm/measures/density.hpp"
#include "lpbm/measures/measure.hpp"
#include "lpbm/psum/psum.hpp"
#include "lpbm/solver/distance.hpp"
#include "lpbm/solver/lp.hpp"
#include "lpbm/solver/membership.hpp"
#include "lpbm/verify/families.hpp"
#include "lpbm/verify/inequality.hpp"
#include "lpbm/verify/lemmas.hpp"
#include "lpbm/verify/suite.hpp"
