#pragma once

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/special_functions.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/chebyshev.hpp"
#include "dirhelm/segment_tree.hpp"
#include "dirhelm/separation.hpp"
#include "dirhelm/pair_plan.hpp"
#include "dirhelm/evaluate.hpp"
#include "dirhelm/oracle.hpp"
#include "dirhelm/rank.hpp"
#include "dirhelm/plan_io.hpp"
#include "dirhelm/experiment.hpp"
