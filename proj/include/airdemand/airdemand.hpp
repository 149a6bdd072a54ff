#pragma once

// Umbrella header.

#include "airdemand/anfis.hpp"
#include "airdemand/ann.hpp"
#include "airdemand/config.hpp"
#include "airdemand/dataset.hpp"
#include "airdemand/harness.hpp"
#include "airdemand/metrics.hpp"
#include "airdemand/model_io.hpp"
#include "airdemand/optimize.hpp"
#include "airdemand/svg.hpp"
#include "airdemand/synth.hpp"
