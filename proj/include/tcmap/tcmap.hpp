#pragma once

#include "tcmap/errors.hpp"
#include "tcmap/exact_linalg.hpp"
#include "tcmap/free_group.hpp"
#include "tcmap/graded_algebra.hpp"
#include "tcmap/catalog.hpp"
#include "tcmap/bounds_engine.hpp"
#include "tcmap/planner_lab.hpp"
#include "tcmap/io.hpp"
