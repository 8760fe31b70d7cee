// Copyright 2026 The DRF Critic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

namespace drf::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Runs one command line. Subcommands: simulate, gen-critical, augment,
/// calibrate, export-dataset, plot. Usage errors print help to `err` and return 1;
/// bad input data returns 2 with the offending path in the message.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drf::cli
