#pragma once

#include "ncspec/errors.hpp"
#include "ncspec/ring.hpp"
#include "ncspec/quaternion.hpp"
#include "ncspec/weight_expr.hpp"
#include "ncspec/band_operator.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/quasidet.hpp"
#include "ncspec/charpoly.hpp"
#include "ncspec/spectral.hpp"
#include "ncspec/oracle.hpp"
