// Copyright 2026 The edp-search Authors
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

#ifndef EDP_EDP_HPP
#define EDP_EDP_HPP

#include "edp/bell.hpp"
#include "edp/encoder.hpp"
#include "edp/gf.hpp"
#include "edp/pauli.hpp"
#include "edp/search.hpp"
#include "edp/sim.hpp"
#include "edp/spec_io.hpp"
#include "edp/statevec.hpp"

#endif  // EDP_EDP_HPP
