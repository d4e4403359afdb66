// Copyright 2026 The qtm-patterns Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "analysis.hpp"
#include "angle_expr.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "gates.hpp"
#include "primitives.hpp"
#include "recursion.hpp"
#include "state_vector.hpp"
#include "trajectory_io.hpp"
