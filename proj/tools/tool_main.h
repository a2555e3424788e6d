// Copyright 2026 The speval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEVAL_TOOLS_TOOL_MAIN_H_
#define SPEVAL_TOOLS_TOOL_MAIN_H_

#include <exception>
#include <iostream>

#include "speval/error.h"

namespace speval::tools {

// Runs `body`, mapping library errors to a message and exit status 1.
template <typename Fn>
int Guarded(const char* tool, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << tool << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << tool << ": unexpected error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace speval::tools

#endif  // SPEVAL_TOOLS_TOOL_MAIN_H_
