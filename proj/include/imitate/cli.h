// include/imitate/cli.h

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

#ifndef IMITATE_CLI_H_
#define IMITATE_CLI_H_

#include <string>
#include <vector>

namespace imitate {

/// Runs the command-line interface on the given arguments (without the
/// program name). Returns the process exit code: 0 success, 2 input
/// error, 3 numeric error. The IMITATE_SEED environment variable supplies
/// the default seed.
int run_cli(const std::vector<std::string>& args);

}  // namespace imitate

#endif  // IMITATE_CLI_H_
