// Copyright 2026 The histocr Authors.
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

namespace histocr {

// Base of every error the library throws. The CLI maps the subclasses onto
// exit codes: Argument/Structural/Io -> 2, Protocol -> 3, anything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input data is well-formed at the byte level but violates a structural
// precondition (mismatched line counts, empty corpus, zero words...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An external evaluator answered with something that is not a valid response.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace histocr
