#pragma once

// Umbrella header for the whole library.

#include "torusfibre/error.hpp"
#include "torusfibre/rational.hpp"
#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/hpfloat.hpp"
#include "torusfibre/phase_series.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/spectrum.hpp"
#include "torusfibre/framing.hpp"
#include "torusfibre/strata.hpp"
#include "torusfibre/cohomology.hpp"
#include "torusfibre/localization.hpp"
#include "torusfibre/invariant.hpp"
#include "torusfibre/fit.hpp"
#include "torusfibre/json_io.hpp"
#include "torusfibre/cli.hpp"
