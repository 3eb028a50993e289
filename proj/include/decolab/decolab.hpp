// Copyright 2026 The decolab Authors
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

#include "decolab/errors.hpp"
#include "decolab/fock.hpp"
#include "decolab/kraus_json.hpp"
#include "decolab/measurement.hpp"
#include "decolab/oracle.hpp"
#include "decolab/parallel.hpp"
#include "decolab/pointer.hpp"
#include "decolab/random.hpp"
#include "decolab/spin_bath.hpp"
#include "decolab/state_algebra.hpp"
#include "decolab/time_series.hpp"
