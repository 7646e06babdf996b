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


#include "modelwright/service/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "modelwright/common/status.h"

namespace modelwright::service {
namespace fs = std::filesystem;

namespace {

absl::Status StorageError(const std::string& what) {
  return MakeError(ErrorKind::kStorageFailure,
                   absl::StrCat(what, ": ", std::strerror(errno)));
}

absl::StatusOr<std::string> ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot read ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string SessionStore::SessionDir(const std::string& id) const {
  return (fs::path(data_dir_) / "sessions" / id).string();
}

std::string SessionStore::NewId() const {
  static thread_local std::mt19937_64 rng(std::random_device{}());
  while (true) {
    const std::string id = absl::StrFormat("%016x", rng());
    if (!Exists(id)) return id;
  }
}

bool SessionStore::IsValidId(const std::string& id) {
  if (id.size() != 16) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

absl::Status SessionStore::CreateSessionDir(const std::string& id) const {
  std::error_code ec;
  fs::create_directories(fs::path(SessionDir(id)) / "files", ec);
  if (ec) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot create session directory: ",
                                  ec.message()));
  }
  return absl::OkStatus();
}

bool SessionStore::Exists(const std::string& id) const {
  std::error_code ec;
  return IsValidId(id) &&
         fs::exists(fs::path(SessionDir(id)) / "events.jsonl", ec);
}

absl::Status SessionStore::Append(const std::string& id,
                                  const std::string& line) const {
  const std::string path = SessionDir(id) + "/events.jsonl";
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC,
                        0644);
  if (fd < 0) return StorageError("cannot open " + path);
  const std::string record = line + "\n";
  const ssize_t written = ::write(fd, record.data(), record.size());
  const int saved = errno;
  ::close(fd);
  if (written != static_cast<ssize_t>(record.size())) {
    errno = saved;
    return StorageError("short write to " + path);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::string>> SessionStore::ReadLog(
    const std::string& id) const {
  MW_ASSIGN_OR_RETURN(std::string text,
                      ReadAll(fs::path(SessionDir(id)) / "events.jsonl"));
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) break;
    if (nl > start) lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

absl::StatusOr<pipeline::Session> SessionStore::Load(
    const std::string& id) const {
  MW_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLog(id));
  return pipeline::Replay(lines);
}

absl::Status SessionStore::SaveFile(const std::string& id,
                                    const std::string& name,
                                    const std::string& bytes) const {
  const fs::path dir = fs::path(SessionDir(id)) / "files";
  const fs::path tmp = dir / ("." + name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) {
      return MakeError(ErrorKind::kStorageFailure,
                       absl::StrCat("cannot write ", tmp.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, dir / name, ec);
  if (ec) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot store ", name, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<pipeline::FileContents> SessionStore::LoadFiles(
    const std::string& id) const {
  pipeline::FileContents files;
  std::error_code ec;
  const fs::path dir = fs::path(SessionDir(id)) / "files";
  for (const fs::directory_entry& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.empty() || name[0] == '.') continue;
    MW_ASSIGN_OR_RETURN(files[name], ReadAll(entry.path()));
  }
  if (ec) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot list ", dir.string(), ": ",
                                  ec.message()));
  }
  return files;
}

std::vector<std::string> SessionStore::ListIds() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const fs::directory_entry& entry :
       fs::directory_iterator(fs::path(data_dir_) / "sessions", ec)) {
    const std::string id = entry.path().filename().string();
    if (Exists(id)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace modelwright::service
