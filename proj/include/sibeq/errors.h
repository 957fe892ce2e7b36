// Copyright 2026 The sibeq Authors
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

#ifndef SIBEQ_ERRORS_H_
#define SIBEQ_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sibeq {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class RowSumError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured cap.
class ExplosionError : public Error {
 public:
  ExplosionError(const std::string& what, double size)
      : Error(what + " (size " + std::to_string(size) + ")"), size_(size) {}
  double size() const { return size_; }

 private:
  double size_;
};

class UndefinedStrategyAtHistory : public Error {
 public:
  using Error::Error;
};

class ZeroMarginalError : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class MissingChildValue : public Error {
 public:
  using Error::Error;
};

class NoEquilibriumFound : public Error {
 public:
  NoEquilibriumFound(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed game or profile file; line and column are 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(Format(what, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string Format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

}  // namespace sibeq

#endif  // SIBEQ_ERRORS_H_
