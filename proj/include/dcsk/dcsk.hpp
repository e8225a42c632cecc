// dcsk.hpp - Umbrella header.

#pragma once

#include "dcsk/analysis.hpp"
#include "dcsk/channel.hpp"
#include "dcsk/chaos.hpp"
#include "dcsk/experiment.hpp"
#include "dcsk/modem.hpp"
#include "dcsk/montecarlo.hpp"
#include "dcsk/quadrature.hpp"
#include "dcsk/rng.hpp"
#include "dcsk/schemes.hpp"
#include "dcsk/special_functions.hpp"
