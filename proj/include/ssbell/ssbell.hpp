// Copyright 2026 The ssbell Authors
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

#pragma once

#include "ssbell/belltests.hpp"
#include "ssbell/error.hpp"
#include "ssbell/inversion.hpp"
#include "ssbell/linalg.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/outcome.hpp"
#include "ssbell/sampler.hpp"
#include "ssbell/states.hpp"
