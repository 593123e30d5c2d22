#pragma once

#include "deprep/basis.hpp"
#include "deprep/density.hpp"
#include "deprep/ensemble.hpp"
#include "deprep/experiments.hpp"
#include "deprep/noise.hpp"
#include "deprep/oracle.hpp"
#include "deprep/purify.hpp"
#include "deprep/qop.hpp"
#include "deprep/repeater.hpp"
