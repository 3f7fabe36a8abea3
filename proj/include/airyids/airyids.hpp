#pragma once

#include "airy.hpp"
#include "bands.hpp"
#include "errors.hpp"
#include "ids.hpp"
#include "ode.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "spectrum.hpp"
#include "transfer.hpp"
#include "verification.hpp"
