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


#ifndef MODELWRIGHT_SERVICE_HTTP_SERVER_H_
#define MODELWRIGHT_SERVICE_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "modelwright/service/service.h"

namespace httplib {
class Server;
}

namespace modelwright::service {

// Routes:
//   POST /v1/sessions
//   POST /v1/sessions/{id}/messages
//   PUT  /v1/sessions/{id}/artifacts/{stage}
//   POST /v1/sessions/{id}/files      multipart field "file", or a raw body
//                                     with ?name=<file name>
//   GET  /v1/sessions/{id}
//   POST /v1/sessions/{id}/solve
//   PUT  /v1/sessions/{id}/visibility
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds the address; port 0 picks a free port. Returns the bound port.
  // Errors: Config when the address cannot be bound.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(). Call after Bind().
  void Listen();
  void Stop();
  // Blocks until the server accepts connections.
  void WaitUntilReady();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace modelwright::service

#endif  // MODELWRIGHT_SERVICE_HTTP_SERVER_H_
