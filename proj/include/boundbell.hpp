// Copyright 2026 The boundbell Authors
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

#include "boundbell/bell_operators.hpp"
#include "boundbell/lhv_lp.hpp"
#include "boundbell/mermin_klyshko.hpp"
#include "boundbell/parallel.hpp"
#include "boundbell/qubit_algebra.hpp"
#include "boundbell/simplex.hpp"
#include "boundbell/witnesses.hpp"
