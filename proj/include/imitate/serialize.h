// include/imitate/serialize.h

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

#ifndef IMITATE_SERIALIZE_H_
#define IMITATE_SERIALIZE_H_

#include <string>
#include <vector>

#include "imitate/data.h"
#include "imitate/hsmm.h"
#include "imitate/task_params.h"

namespace imitate {

// Versioned JSON files ("v1"). Numeric round-trips are exact; non-finite
// values and unknown versions are rejected. Parse failures throw
// ParseError with field context and never return partial objects.

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

void save_model(const HsmmModel& model, const std::string& path);
HsmmModel load_model(const std::string& path);

void save_frames(const FrameSet& frames, const std::string& path);
FrameSet load_frames(const std::string& path);

}  // namespace imitate

#endif  // IMITATE_SERIALIZE_H_
