#pragma once

#include "meanscope/ando_hiai.hpp"
#include "meanscope/classify.hpp"
#include "meanscope/gamma_region.hpp"
#include "meanscope/geodesic.hpp"
#include "meanscope/hansen.hpp"
#include "meanscope/matrix.hpp"
#include "meanscope/mean_function.hpp"
#include "meanscope/quadrature.hpp"
#include "meanscope/serialize.hpp"
#include "meanscope/solvers.hpp"
