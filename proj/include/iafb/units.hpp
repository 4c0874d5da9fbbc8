// SPDX-License-Identifier: Apache-2.0
//
// iafb - channel prediction and limited feedback for interference alignment
// Copyright (C) 2026 The iafb Authors
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

// Conversion from physical mobility parameters to the normalized Doppler
// frequency seen by the core modules.

#pragma once

#include "iafb/types.hpp"

namespace iafb::units {

constexpr double carrier_frequency_hz = 2.5e9;
constexpr double symbol_rate_hz = 1.4e4;
constexpr double speed_of_light = 299792458.0;

/// nu_D = v f_c / c0 * T_s with v in km/h.
inline double doppler_from_velocity(double kmh, double fc = carrier_frequency_hz, double symbol_rate = symbol_rate_hz) {
    if (!(kmh >= 0.0)) throw ConfigError("velocity must be non-negative");
    return kmh / 3.6 * fc / speed_of_light / symbol_rate;
}

inline double velocity_from_doppler(double nu, double fc = carrier_frequency_hz, double symbol_rate = symbol_rate_hz) {
    return nu * symbol_rate * speed_of_light / fc * 3.6;
}

}  // namespace iafb::units
