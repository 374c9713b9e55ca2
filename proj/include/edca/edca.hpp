// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "edca/access_category.hpp"
#include "edca/params.hpp"
#include "edca/traffic.hpp"
#include "edca/queue.hpp"
#include "edca/ac_chain.hpp"
#include "edca/stationary.hpp"
#include "edca/solver.hpp"
#include "edca/metrics.hpp"
#include "edca/simulator.hpp"
#include "edca/config.hpp"
#include "edca/batch.hpp"
