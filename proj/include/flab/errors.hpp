// Copyright 2026 The frustration-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLAB_ERRORS_HPP
#define FLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flab {

/// Malformed or out-of-range input (bad dimensions, wrong sizes, missing data).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that exceeds a backend's resource cap (site count, width, state list).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An internal cross-check failed; indicates a defect, never bad input.
class SelfCheckError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace flab

#endif  // FLAB_ERRORS_HPP
