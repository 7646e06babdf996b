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


#ifndef MODELWRIGHT_SERVICE_STORE_H_
#define MODELWRIGHT_SERVICE_STORE_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "modelwright/pipeline/data.h"
#include "modelwright/pipeline/session.h"

namespace modelwright::service {

// On-disk layout: <data_dir>/sessions/<id>/events.jsonl holds the event log,
// <data_dir>/sessions/<id>/files/ the uploaded data files.
class SessionStore {
 public:
  explicit SessionStore(std::string data_dir) : data_dir_(std::move(data_dir)) {}

  // Lowercase hex, 16 digits, not yet present on disk.
  std::string NewId() const;
  static bool IsValidId(const std::string& id);

  // Errors: StorageFailure.
  absl::Status CreateSessionDir(const std::string& id) const;
  bool Exists(const std::string& id) const;

  // One write(2) on an O_APPEND descriptor per event.
  absl::Status Append(const std::string& id, const std::string& line) const;

  // Complete lines of the log. A final line without its newline is a torn
  // write and is dropped. Errors: StorageFailure.
  absl::StatusOr<std::vector<std::string>> ReadLog(const std::string& id) const;

  // Errors: StorageFailure, plus those of pipeline::Replay.
  absl::StatusOr<pipeline::Session> Load(const std::string& id) const;

  // Writes through a temporary file and rename. Errors: StorageFailure.
  absl::Status SaveFile(const std::string& id, const std::string& name,
                        const std::string& bytes) const;
  absl::StatusOr<pipeline::FileContents> LoadFiles(const std::string& id) const;

  std::vector<std::string> ListIds() const;

  std::string SessionDir(const std::string& id) const;

 private:
  std::string data_dir_;
};

}  // namespace modelwright::service

#endif  // MODELWRIGHT_SERVICE_STORE_H_
