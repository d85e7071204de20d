// Copyright 2026 The qadapt Authors
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

namespace qadapt {

/// Base class for every error raised by the library. The C API maps the
/// subclasses onto `qa_status` codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad parameter, bad index).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Two operands disagree on the Hilbert-space dimension.
class DimensionMismatch : public Error {
  public:
    DimensionMismatch(const std::string &what, std::size_t lhs, std::size_t rhs)
        : Error(what + ": dimension mismatch (" + std::to_string(lhs) +
                " vs " + std::to_string(rhs) + ")") {}
};

/// Floating point state drifted beyond what rounding can explain.
class NumericalError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qadapt
