// SPDX-License-Identifier: Apache-2.0
//
// stsfusion - space-time spreading aided decision fusion for wireless sensor networks
// Copyright (C) 2026 stsfusion contributors
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

#ifndef STSFUSION_STSFUSION_HPP
#define STSFUSION_STSFUSION_HPP

#include "stsfusion/channel.hpp"
#include "stsfusion/config.hpp"
#include "stsfusion/dispersion.hpp"
#include "stsfusion/encoding.hpp"
#include "stsfusion/errors.hpp"
#include "stsfusion/fusion.hpp"
#include "stsfusion/rng.hpp"
#include "stsfusion/sensors.hpp"
#include "stsfusion/simulate.hpp"

#endif  // STSFUSION_STSFUSION_HPP
