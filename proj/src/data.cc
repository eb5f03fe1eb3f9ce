// src/data.cc

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

#include "imitate/data.h"

#include <string>

#include "imitate/error.h"

namespace imitate {

void validate_dataset(const Dataset& dataset) {
  for (size_t m = 0; m < dataset.demos.size(); ++m) {
    const Demonstration& demo = dataset.demos[m];
    const std::string where = "demo " + std::to_string(m);
    if (demo.dim() != dataset.dim) {
      throw InputError(where + " has dimension " + std::to_string(demo.dim()) +
                       ", dataset declares " + std::to_string(dataset.dim));
    }
    if (static_cast<int>(demo.frames.size()) != dataset.num_frames) {
      throw InputError(where + " has " + std::to_string(demo.frames.size()) +
                       " frames, dataset declares " +
                       std::to_string(dataset.num_frames));
    }
    if (!demo.points.allFinite()) {
      throw InputError(where + " contains non-finite observations");
    }
    for (size_t j = 0; j < demo.frames.size(); ++j) {
      const AffineFrame& fr = demo.frames[j];
      if (fr.A.rows() != dataset.dim || fr.A.cols() != dataset.dim ||
          fr.b.size() != dataset.dim) {
        throw InputError(where + " frame " + std::to_string(j) +
                         " has inconsistent dimensions");
      }
      if (!fr.A.allFinite() || !fr.b.allFinite()) {
        throw InputError(where + " frame " + std::to_string(j) +
                         " contains non-finite values");
      }
    }
  }
}

}  // namespace imitate
