#pragma once

#include "mtrd/arbitrary_function.hpp"
#include "mtrd/constraint.hpp"
#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/expression.hpp"
#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"
#include "mtrd/pde.hpp"
#include "mtrd/poly_function.hpp"
#include "mtrd/quadrature.hpp"
#include "mtrd/report.hpp"
#include "mtrd/rk4.hpp"
#include "mtrd/simulator.hpp"
#include "mtrd/transforms.hpp"
#include "mtrd/verifier.hpp"
#include "mtrd/wave_ode.hpp"
