#pragma once

#include "mcwin/channel.hpp"
#include "mcwin/config.hpp"
#include "mcwin/csv.hpp"
#include "mcwin/error.hpp"
#include "mcwin/experiment.hpp"
#include "mcwin/metrics.hpp"
#include "mcwin/montecarlo.hpp"
#include "mcwin/optimizer.hpp"
#include "mcwin/parallel.hpp"
#include "mcwin/params.hpp"
#include "mcwin/reception.hpp"
#include "mcwin/special.hpp"
#include "mcwin/taps.hpp"
#include "mcwin/window.hpp"
