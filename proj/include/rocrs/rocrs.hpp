// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROCRS_ROCRS_HPP
#define ROCRS_ROCRS_HPP

#include "rocrs/auction.hpp"
#include "rocrs/constraint.hpp"
#include "rocrs/controllers.hpp"
#include "rocrs/crs.hpp"
#include "rocrs/diagnostics.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/exchange.hpp"
#include "rocrs/experiment.hpp"
#include "rocrs/generators.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/io.hpp"
#include "rocrs/knapsack.hpp"
#include "rocrs/lp.hpp"
#include "rocrs/matroid.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/polytope.hpp"
#include "rocrs/probing.hpp"
#include "rocrs/random.hpp"
#include "rocrs/relaxations.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/submodular.hpp"
#include "rocrs/support.hpp"
#include "rocrs/trace.hpp"

#endif  // ROCRS_ROCRS_HPP
