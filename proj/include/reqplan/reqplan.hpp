// Copyright 2026 The reqplan Authors
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

#include "reqplan/analysis.hpp"
#include "reqplan/api_service.hpp"
#include "reqplan/consensus_plan.hpp"
#include "reqplan/constraint_solver.hpp"
#include "reqplan/diagnosis.hpp"
#include "reqplan/error.hpp"
#include "reqplan/factorization.hpp"
#include "reqplan/model.hpp"
#include "reqplan/mvp_select.hpp"
#include "reqplan/project_io.hpp"
#include "reqplan/release_constraint.hpp"
#include "reqplan/stakeholder_match.hpp"
#include "reqplan/utility_rank.hpp"
