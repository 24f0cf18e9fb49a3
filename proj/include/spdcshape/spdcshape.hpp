#pragma once

#include "spdcshape/analysis.hpp"
#include "spdcshape/biphoton.hpp"
#include "spdcshape/config.hpp"
#include "spdcshape/dispersion.hpp"
#include "spdcshape/errors.hpp"
#include "spdcshape/experiment.hpp"
#include "spdcshape/fft.hpp"
#include "spdcshape/inverse.hpp"
#include "spdcshape/io.hpp"
#include "spdcshape/pump.hpp"
#include "spdcshape/quadrature.hpp"
#include "spdcshape/svg.hpp"
#include "spdcshape/units.hpp"
