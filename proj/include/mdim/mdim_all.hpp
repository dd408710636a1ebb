#pragma once

#include "mdim/config.hpp"
#include "mdim/entropy.hpp"
#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"
#include "mdim/mdim.hpp"
#include "mdim/mdim_fit.hpp"
#include "mdim/measure.hpp"
#include "mdim/measure_sample.hpp"
#include "mdim/pack_cover.hpp"
#include "mdim/parallel.hpp"
#include "mdim/report.hpp"
#include "mdim/rng.hpp"
#include "mdim/run.hpp"
#include "mdim/semigroup.hpp"
#include "mdim/space.hpp"
#include "mdim/version.hpp"
