// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#pragma once

namespace rfscene {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rfscene
