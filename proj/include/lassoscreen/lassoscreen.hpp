#pragma once

#include "lassoscreen/csv.hpp"
#include "lassoscreen/data.hpp"
#include "lassoscreen/io.hpp"
#include "lassoscreen/path.hpp"
#include "lassoscreen/screening.hpp"
#include "lassoscreen/simulate.hpp"
#include "lassoscreen/solver.hpp"
#include "lassoscreen/types.hpp"
