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


#include "modelwright/service/http_server.h"

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "modelwright/common/status.h"

namespace modelwright::service {
namespace {

constexpr char kId[] = "([0-9A-Za-z_-]+)";

void Send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(Service& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& s = *server_;
  const std::string base = "/v1/sessions";
  const std::string one = base + "/" + kId;
  s.set_payload_max_length(service_.config().max_upload_bytes * 2 + (1 << 16));

  s.Post(base, [this](const httplib::Request&, httplib::Response& res) {
    Send(res, service_.CreateSession());
  });
  s.Get(one, [this](const httplib::Request& req, httplib::Response& res) {
    Send(res, service_.GetSession(req.matches[1]));
  });
  s.Post(one + "/messages",
         [this](const httplib::Request& req, httplib::Response& res) {
           Send(res, service_.PostMessage(req.matches[1], req.body));
         });
  s.Put(one + "/artifacts/([a-z]+)",
        [this](const httplib::Request& req, httplib::Response& res) {
          Send(res, service_.EditArtifact(req.matches[1], req.matches[2],
                                          req.body));
        });
  s.Post(one + "/solve",
         [this](const httplib::Request& req, httplib::Response& res) {
           Send(res, service_.Solve(req.matches[1]));
         });
  s.Put(one + "/visibility",
        [this](const httplib::Request& req, httplib::Response& res) {
          Send(res, service_.SetVisibility(req.matches[1], req.body));
        });
  s.Post(one + "/files",
         [this](const httplib::Request& req, httplib::Response& res) {
           if (req.is_multipart_form_data()) {
             if (!req.has_file("file")) {
               Send(res, ErrorResponse(400, "BadRequest",
                                       "multipart upload needs a 'file' field"));
               return;
             }
             const httplib::MultipartFormData file = req.get_file_value("file");
             Send(res, service_.UploadFile(req.matches[1], file.filename,
                                           file.content));
             return;
           }
           if (!req.has_param("name")) {
             Send(res, ErrorResponse(400, "BadRequest",
                                     "raw uploads need ?name=<file name>"));
             return;
           }
           Send(res, service_.UploadFile(req.matches[1],
                                         req.get_param_value("name"), req.body));
         });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string kind = res.status == 413   ? "PayloadTooLarge"
                             : res.status == 404 ? "NotFound"
                                                 : "HttpError";
    Send(res, ErrorResponse(res.status, kind,
                            absl::StrCat("HTTP ", res.status)));
  });
}

HttpServer::~HttpServer() { Stop(); }

absl::StatusOr<int> HttpServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("cannot listen on ", host, ":", port));
  }
  return bound;
}

void HttpServer::Listen() { server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_->is_running()) server_->stop();
}

void HttpServer::WaitUntilReady() { server_->wait_until_ready(); }

}  // namespace modelwright::service
