// Copyright 2026 The Backbone Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#ifndef BACKBONE_BACKBONE_HPP_
#define BACKBONE_BACKBONE_HPP_

#include "backbone/adversary.hpp"
#include "backbone/analysis.hpp"
#include "backbone/bounds.hpp"
#include "backbone/chain_store.hpp"
#include "backbone/chain_view.hpp"
#include "backbone/cli.hpp"
#include "backbone/experiment.hpp"
#include "backbone/mining_sim.hpp"
#include "backbone/params.hpp"
#include "backbone/prism.hpp"
#include "backbone/rng.hpp"
#include "backbone/stats.hpp"
#include "backbone/trace.hpp"

#endif  // BACKBONE_BACKBONE_HPP_
