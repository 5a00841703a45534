// Copyright 2026 The cvqnd Authors
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

#ifndef CVQND_VALIDATION_H
#define CVQND_VALIDATION_H

#include <cstdint>
#include <string>
#include <vector>

namespace cvqnd {

struct ValidationOptions {
  uint64_t seed = 7;
  size_t runs = 1000000;
  unsigned workers = 1;
  size_t random_cases = 1000;
};

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Ensemble-vs-Monte-Carlo agreement for every protocol kind plus the
/// randomized symplectic, physicality and conditioning invariants.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace cvqnd

#endif  // CVQND_VALIDATION_H
