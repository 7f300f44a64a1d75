#ifndef FPFACTOR_FPFACTOR_HPP
#define FPFACTOR_FPFACTOR_HPP

#include "fpfactor/exact.hpp"
#include "fpfactor/feasibility.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/io.hpp"
#include "fpfactor/oracle.hpp"
#include "fpfactor/propagator.hpp"
#include "fpfactor/rounding.hpp"
#include "fpfactor/solver.hpp"

#endif
