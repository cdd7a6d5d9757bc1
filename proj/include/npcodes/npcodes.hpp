// Copyright 2026 The npcodes Authors
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

#include "npcodes/analytics.hpp"
#include "npcodes/codes.hpp"
#include "npcodes/csv.hpp"
#include "npcodes/errors.hpp"
#include "npcodes/fock.hpp"
#include "npcodes/noise.hpp"
#include "npcodes/parallel.hpp"
#include "npcodes/qec.hpp"
#include "npcodes/repeater.hpp"
