// Copyright 2026 The ssbell Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace ssbell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
   public:
    using Error::Error;
};

class NotUnitTrace : public Error {
   public:
    using Error::Error;
};

class NotPSD : public Error {
   public:
    using Error::Error;
};

class NotFinite : public Error {
   public:
    using Error::Error;
};

class OutOfRange : public Error {
   public:
    using Error::Error;
};

class GammaOutOfRange : public Error {
   public:
    using Error::Error;
};

/// A joint POVM element left the positive cone.
class NotPositive : public Error {
   public:
    using Error::Error;
};

class InvalidObservable : public Error {
   public:
    using Error::Error;
};

class InvalidDistribution : public Error {
   public:
    using Error::Error;
};

class EmptyShotList : public Error {
   public:
    using Error::Error;
};

/// Two computational routes that must agree did not.
class InternalConsistencyError : public Error {
   public:
    using Error::Error;
};

/// Malformed or inadmissible experiment configuration.
class ConfigError : public Error {
   public:
    using Error::Error;
};

}  // namespace ssbell
