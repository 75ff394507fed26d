#pragma once

#include "fineval/cli.hpp"
#include "fineval/csv.hpp"
#include "fineval/error.hpp"
#include "fineval/forecast.hpp"
#include "fineval/frame.hpp"
#include "fineval/metrics.hpp"
#include "fineval/options.hpp"
#include "fineval/parallel.hpp"
#include "fineval/preprocess.hpp"
#include "fineval/random.hpp"
#include "fineval/stats.hpp"
#include "fineval/strategy.hpp"
#include "fineval/tensor.hpp"
#include "fineval/version.hpp"
