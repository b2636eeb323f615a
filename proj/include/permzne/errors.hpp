// Copyright 2026 The permzne Authors
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

namespace permzne {

/// Request exceeds what a dense backend can hold (qubit count, n! enumeration).
class CapabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// All abscissae of a fit coincide; carries the common ordinate mean.
class DegenerateDesignError : public std::runtime_error {
  public:
    DegenerateDesignError(const std::string &what, double mean_y)
        : std::runtime_error(what), mean_y_(mean_y) {}
    [[nodiscard]] double mean_y() const noexcept { return mean_y_; }

  private:
    double mean_y_;
};

} // namespace permzne
