// Copyright 2026 The mopo Authors
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

#ifndef MOPO_ERRORS_HPP_
#define MOPO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mopo {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Bad input: malformed files, unknown identifiers, ill-shaped objects.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A well-posed query whose answer is negative (not achievable, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

#define MOPO_DECLARE_ERROR(Name, Base)                               \
  class Name : public Base {                                         \
   public:                                                           \
    using Base::Base;                                                \
    const char* kind() const noexcept override { return #Name; }     \
  }

MOPO_DECLARE_ERROR(ParseError, InputError);
MOPO_DECLARE_ERROR(SchemaError, InputError);
MOPO_DECLARE_ERROR(UnknownState, InputError);
MOPO_DECLARE_ERROR(DisabledAction, InputError);
MOPO_DECLARE_ERROR(MalformedLasso, InputError);
MOPO_DECLARE_ERROR(MalformedHistory, InputError);
MOPO_DECLARE_ERROR(UnknownScc, InputError);
MOPO_DECLARE_ERROR(DimensionMismatch, InputError);
MOPO_DECLARE_ERROR(UnsupportedKind, InputError);
MOPO_DECLARE_ERROR(PoolTooLarge, InputError);
MOPO_DECLARE_ERROR(EmptySupport, InputError);

MOPO_DECLARE_ERROR(UndefinedExpectation, DomainError);
MOPO_DECLARE_ERROR(NotInHull, DomainError);
MOPO_DECLARE_ERROR(NotDominated, DomainError);
MOPO_DECLARE_ERROR(NotAchievable, DomainError);
MOPO_DECLARE_ERROR(InfeasibleApproximation, DomainError);
MOPO_DECLARE_ERROR(PreconditionViolated, DomainError);

// Raised when an internal linear system turns out singular. Valid inputs
// never trigger it.
MOPO_DECLARE_ERROR(SingularSystem, Error);

#undef MOPO_DECLARE_ERROR

}  // namespace mopo

#endif  // MOPO_ERRORS_HPP_
