#pragma once

#include "moebius/errors.hpp"
#include "moebius/symmetric_eigen.hpp"
#include "moebius/minkowski.hpp"
#include "moebius/spheres.hpp"
#include "moebius/pairs.hpp"
#include "moebius/equivalence.hpp"
#include "moebius/sampling.hpp"
