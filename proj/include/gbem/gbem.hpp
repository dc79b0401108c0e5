#pragma once

#include "gbem/assembly.hpp"
#include "gbem/errors.hpp"
#include "gbem/extraction.hpp"
#include "gbem/geometry.hpp"
#include "gbem/kernels.hpp"
#include "gbem/model_io.hpp"
#include "gbem/oracle.hpp"
#include "gbem/partition.hpp"
#include "gbem/quadrature.hpp"
#include "gbem/selftest.hpp"
#include "gbem/solver.hpp"
#include "gbem/version.hpp"
