// Copyright 2026 The Modelwright Authors
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

#include "modelwright/common/status.h"

#include <optional>

#include "absl/strings/cord.h"

namespace modelwright {
namespace {

constexpr char kKindPayloadUrl[] = "type.modelwright/error-kind";

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidIR:
    case ErrorKind::kMalformedModelOutput:
    case ErrorKind::kBadSelector:
    case ErrorKind::kUnboundPlaceholder:
    case ErrorKind::kConfig:
      return absl::StatusCode::kInvalidArgument;
    case ErrorKind::kMissingParameter:
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kUnresolvedParameters:
    case ErrorKind::kPrecondition:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kBackendUnavailable:
      return absl::StatusCode::kUnavailable;
    case ErrorKind::kTimeout:
      return absl::StatusCode::kDeadlineExceeded;
    case ErrorKind::kFixtureMiss:
    case ErrorKind::kMissingFile:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kStorageFailure:
      return absl::StatusCode::kInternal;
    case ErrorKind::kUnknown:
      break;
  }
  return absl::StatusCode::kUnknown;
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknown: return "Unknown";
    case ErrorKind::kInvalidIR: return "InvalidIR";
    case ErrorKind::kMissingParameter: return "MissingParameter";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kUnresolvedParameters: return "UnresolvedParameters";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kTimeout: return "Timeout";
    case ErrorKind::kFixtureMiss: return "FixtureMiss";
    case ErrorKind::kUnboundPlaceholder: return "UnboundPlaceholder";
    case ErrorKind::kMalformedModelOutput: return "MalformedModelOutput";
    case ErrorKind::kMissingFile: return "MissingFile";
    case ErrorKind::kBadSelector: return "BadSelector";
    case ErrorKind::kStorageFailure: return "StorageFailure";
    case ErrorKind::kPrecondition: return "Precondition";
    case ErrorKind::kConfig: return "Config";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, const std::string& message) {
  absl::Status status(CodeFor(kind),
                      std::string(ErrorKindName(kind)) + ": " + message);
  status.SetPayload(kKindPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

ErrorKind KindOf(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kUnknown;
  auto payload = status.GetPayload(kKindPayloadUrl);
  if (!payload.has_value()) return ErrorKind::kUnknown;
  const std::string name(*payload);
  for (int k = 0; k <= static_cast<int>(ErrorKind::kConfig); ++k) {
    auto kind = static_cast<ErrorKind>(k);
    if (name == ErrorKindName(kind)) return kind;
  }
  return ErrorKind::kUnknown;
}

}  // namespace modelwright
