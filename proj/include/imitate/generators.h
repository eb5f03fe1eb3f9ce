// include/imitate/generators.h

// Copyright 2026  Imitate Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef IMITATE_GENERATORS_H_
#define IMITATE_GENERATORS_H_

#include <cstdint>

#include "imitate/data.h"

namespace imitate {

/// Piecewise-linear Z in 3-D (three strokes, two interior corners), one
/// demo per equally spaced lateral offset, plus isotropic Gaussian noise.
/// Corner samples land exactly on the corners. Deterministic per seed.
Dataset gen_zshape(int n_demos, int steps, double noise, uint64_t seed);

/// Planar pick-over-place analogue with two frames per demonstration: a
/// start frame at the first point and a goal frame at the last, both
/// rotated to the start-to-goal direction. The via-region height varies
/// per demo and is left unexplained by the frames. Metadata records the
/// alternating train/test split. Deterministic per seed.
Dataset gen_pickplace(int n_demos, int steps, uint64_t seed);

}  // namespace imitate

#endif  // IMITATE_GENERATORS_H_
