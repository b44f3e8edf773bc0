#pragma once

#include "alq/datagen.hpp"
#include "alq/error.hpp"
#include "alq/glm.hpp"
#include "alq/metrics.hpp"
#include "alq/random.hpp"
#include "alq/report.hpp"
#include "alq/simulation.hpp"
#include "alq/special.hpp"
#include "alq/strategies.hpp"
