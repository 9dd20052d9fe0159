#ifndef RANGESHAPE_RANGESHAPE_HPP
#define RANGESHAPE_RANGESHAPE_HPP

#include "decision.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "numrange.hpp"
#include "parallel.hpp"
#include "polar.hpp"
#include "poly.hpp"
#include "rigidity.hpp"

#endif
