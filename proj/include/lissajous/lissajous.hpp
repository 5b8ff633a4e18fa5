#pragma once

#include "lissajous/discriminant.hpp"
#include "lissajous/dynamics.hpp"
#include "lissajous/error.hpp"
#include "lissajous/exactmat.hpp"
#include "lissajous/graphs.hpp"
#include "lissajous/model.hpp"
#include "lissajous/polynomial.hpp"
#include "lissajous/polytope.hpp"
#include "lissajous/posopt.hpp"
