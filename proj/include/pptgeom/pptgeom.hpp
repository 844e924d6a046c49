// Copyright 2026 The pptgeom Authors
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

#pragma once

#include "pptgeom/body_geometry.hpp"
#include "pptgeom/core.hpp"
#include "pptgeom/estimators.hpp"
#include "pptgeom/hermitian.hpp"
#include "pptgeom/metropolis.hpp"
#include "pptgeom/polytope.hpp"
#include "pptgeom/random_states.hpp"
#include "pptgeom/rng.hpp"
#include "pptgeom/stats.hpp"
#include "pptgeom/validation.hpp"
