// Copyright 2026 The Persona Authors.
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

// Everything except the HTTP service, which pulls in the socket library.

#ifndef PERSONA_PERSONA_HPP_
#define PERSONA_PERSONA_HPP_

#include "persona/argumentation.hpp"
#include "persona/baselines.hpp"
#include "persona/belief.hpp"
#include "persona/dialogue.hpp"
#include "persona/error.hpp"
#include "persona/experiments.hpp"
#include "persona/json_io.hpp"
#include "persona/logic.hpp"
#include "persona/manifest.hpp"
#include "persona/personalization.hpp"
#include "persona/ranking.hpp"
#include "persona/replay.hpp"
#include "persona/statistics.hpp"
#include "persona/synthetic.hpp"
#include "persona/weighting.hpp"

#endif  // PERSONA_PERSONA_HPP_
