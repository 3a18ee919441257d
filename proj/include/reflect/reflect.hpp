#pragma once

#include "reflect/catalog.hpp"
#include "reflect/cone.hpp"
#include "reflect/error.hpp"
#include "reflect/grid.hpp"
#include "reflect/kernel.hpp"
#include "reflect/linsolve.hpp"
#include "reflect/monotone.hpp"
#include "reflect/quadrature.hpp"
#include "reflect/reduce.hpp"
