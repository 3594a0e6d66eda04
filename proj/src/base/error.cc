// base/error.cc

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

#include "sparch/base/error.h"

#include <iostream>

namespace sparch {

namespace {
int g_verbosity = 0;
}  // namespace

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kSequenceTooShort: return "sequence-too-short";
    case ErrorKind::kLength: return "length";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kNonFinite: return "non-finite";
    case ErrorKind::kUndefined: return "undefined";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kData: return "data";
    case ErrorKind::kFingerprint: return "fingerprint";
    case ErrorKind::kDivergence: return "divergence";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + " error: " + message),
      kind_(kind) {}

namespace internal {

void ErrorThrower::operator=(const ErrorStream &stream) const {
  throw Error(kind_, stream.str());
}

LogMessage::~LogMessage() {
  const char *prefix = level_ == LogLevel::kWarning ? "WARNING: " : "LOG: ";
  std::cerr << prefix << stream_.str() << '\n';
}

}  // namespace internal

void SetVerbosity(int level) { g_verbosity = level; }
int GetVerbosity() { return g_verbosity; }

}  // namespace sparch
