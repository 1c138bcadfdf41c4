#pragma once

// Umbrella header for the delayed HIV/AIDS education-campaign model toolkit.

#include "hivdde/dataset.hpp"
#include "hivdde/equilibria.hpp"
#include "hivdde/estimation.hpp"
#include "hivdde/integrator.hpp"
#include "hivdde/model.hpp"
#include "hivdde/optimize.hpp"
#include "hivdde/params.hpp"
#include "hivdde/stability.hpp"
