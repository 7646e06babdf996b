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

#ifndef MODELWRIGHT_COMMON_STATUS_H_
#define MODELWRIGHT_COMMON_STATUS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace modelwright {

// Domain error kinds. Each maps onto a canonical absl code and is attached to
// the status as a payload so callers can branch on the precise failure.
enum class ErrorKind {
  kUnknown,
  kInvalidIR,
  kMissingParameter,
  kDimensionMismatch,
  kUnresolvedParameters,
  kBackendUnavailable,
  kTimeout,
  kFixtureMiss,
  kUnboundPlaceholder,
  kMalformedModelOutput,
  kMissingFile,
  kBadSelector,
  kStorageFailure,
  kPrecondition,
  kConfig,
};

const char* ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, const std::string& message);

// Returns kUnknown for OK statuses and for statuses created elsewhere.
ErrorKind KindOf(const absl::Status& status);

}  // namespace modelwright

#define MW_RETURN_IF_ERROR(expr)          \
  do {                                    \
    ::absl::Status mw_status_ = (expr);   \
    if (!mw_status_.ok()) return mw_status_; \
  } while (false)

#define MW_CONCAT_INNER_(a, b) a##b
#define MW_CONCAT_(a, b) MW_CONCAT_INNER_(a, b)
#define MW_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                              \
  if (!tmp.ok()) return tmp.status();             \
  lhs = std::move(*tmp)
#define MW_ASSIGN_OR_RETURN(lhs, expr) \
  MW_ASSIGN_OR_RETURN_IMPL_(MW_CONCAT_(mw_statusor_, __LINE__), lhs, expr)

#endif  // MODELWRIGHT_COMMON_STATUS_H_
