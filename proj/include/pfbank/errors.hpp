// Copyright 2026 the pfbank authors
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

#include <stdexcept>
#include <string>

namespace pfbank {

// Infeasible filter design request (band above Nyquist, edges that cannot be
// separated, ...). Distinct from std::domain_error so callers can map it to a
// dedicated exit status.
class design_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document; carries the 1-based line number of the offense.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace pfbank
