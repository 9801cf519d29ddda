// Copyright 2026 The apgame Authors
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

#ifndef APGAME_ERRORS_H_
#define APGAME_ERRORS_H_

#include <stdexcept>
#include <string>

namespace apgame {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration. field_path names the offending
// entry, e.g. "game.gamma[0]".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field_path)
      : Error(what), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Backward integration left the representable range.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, int knot, double time)
      : NumericalError(what), knot_(knot), time_(time) {}
  int knot() const { return knot_; }
  double time() const { return time_; }

 private:
  int knot_;
  double time_;
};

}  // namespace apgame

#endif  // APGAME_ERRORS_H_
