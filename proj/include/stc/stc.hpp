#pragma once

// Umbrella header for the self-tuning-control simulation toolkit.

#include "stc/armax_parameters.hpp"
#include "stc/config_json.hpp"
#include "stc/controller.hpp"
#include "stc/csv.hpp"
#include "stc/delay_polynomial.hpp"
#include "stc/errors.hpp"
#include "stc/metrics.hpp"
#include "stc/noise.hpp"
#include "stc/plant.hpp"
#include "stc/rls.hpp"
#include "stc/scenario.hpp"
#include "stc/signal_history.hpp"
