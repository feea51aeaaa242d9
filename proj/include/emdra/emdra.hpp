#pragma once
// Convenience umbrella: the whole library.
#include "emdra/arima.hpp"
#include "emdra/baselines.hpp"
#include "emdra/chan_sim.hpp"
#include "emdra/config.hpp"
#include "emdra/csv.hpp"
#include "emdra/emd.hpp"
#include "emdra/fbl.hpp"
#include "emdra/forecast.hpp"
#include "emdra/forecast_types.hpp"
#include "emdra/harness.hpp"
#include "emdra/lstm.hpp"
#include "emdra/rng.hpp"
#include "emdra/svg.hpp"
#include "emdra/threadpool.hpp"
