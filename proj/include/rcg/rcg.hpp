#ifndef RCG_RCG_HPP
#define RCG_RCG_HPP

#include "rcg/cg.hpp"
#include "rcg/checks.hpp"
#include "rcg/core.hpp"
#include "rcg/diagnostics.hpp"
#include "rcg/experiments.hpp"
#include "rcg/linesearch.hpp"
#include "rcg/manifolds/product.hpp"
#include "rcg/manifolds/sphere.hpp"
#include "rcg/manifolds/stiefel.hpp"
#include "rcg/problems.hpp"
#include "rcg/trace.hpp"
#include "rcg/transports.hpp"

#endif  // RCG_RCG_HPP
