// SPDX-License-Identifier: Apache-2.0
//
// macstbc: space-time block codes with reduced sphere-decoding complexity
// for the two-user MIMO multiple access channel
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "macstbc/decoder.hpp"
#include "macstbc/design.hpp"
#include "macstbc/io.hpp"
#include "macstbc/lattice.hpp"
#include "macstbc/matrix.hpp"
#include "macstbc/qr.hpp"
#include "macstbc/rng.hpp"
#include "macstbc/simulator.hpp"
