// sparch/base/error.h

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARCH_BASE_ERROR_H_
#define SPARCH_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace sparch {

/// Error categories. The CLI maps these onto exit codes, so new kinds must
/// also be added to the exit-code table in tools/sparch.cc.
enum class ErrorKind {
  kDimension,
  kConfig,
  kSequenceTooShort,
  kLength,
  kEmptyInput,
  kNonFinite,
  kUndefined,
  kIo,
  kData,
  kFingerprint,
  kDivergence,
};

const char *ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

namespace internal {

class ErrorStream {
 public:
  template <typename T>
  ErrorStream &operator<<(const T &value) {
    stream_ << value;
    return *this;
  }
  std::string str() const { return stream_.str(); }

 private:
  std::ostringstream stream_;
};

class ErrorThrower {
 public:
  explicit ErrorThrower(ErrorKind kind) : kind_(kind) {}
  // Assignment binds looser than <<, so the whole message is built first.
  [[noreturn]] void operator=(const ErrorStream &stream) const;

 private:
  ErrorKind kind_;
};

enum class LogLevel { kInfo, kWarning };

class LogMessage {
 public:
  explicit LogMessage(LogLevel level) : level_(level) {}
  ~LogMessage();
  template <typename T>
  LogMessage &operator<<(const T &value) {
    stream_ << value;
    return *this;
  }

 private:
  LogLevel level_;
  std::ostringstream stream_;
};

}  // namespace internal

/// 0 silences SPARCH_LOG; warnings are always printed.
void SetVerbosity(int level);
int GetVerbosity();

}  // namespace sparch

#define SPARCH_ERR(kind)                                     \
  ::sparch::internal::ErrorThrower(::sparch::ErrorKind::kind) = \
      ::sparch::internal::ErrorStream()

#define SPARCH_LOG                       \
  if (::sparch::GetVerbosity() <= 0) {   \
  } else                                 \
    ::sparch::internal::LogMessage(::sparch::internal::LogLevel::kInfo)

#define SPARCH_WARN \
  ::sparch::internal::LogMessage(::sparch::internal::LogLevel::kWarning)

#endif  // SPARCH_BASE_ERROR_H_
