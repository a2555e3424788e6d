// Copyright 2026 The speval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEVAL_HTTP_API_H_
#define SPEVAL_HTTP_API_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "speval/error.h"
#include "speval/listening_test.h"

namespace speval {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Transport-independent router for the listening-test JSON API:
//   POST /experiments                     definition -> {experiment_id}
//   POST /experiments/{id}/enroll         {panel_id?, participant_id?} -> enrollment
//   GET  /experiments/{id}/export         ?format=json|jsonl|mos_csv
//   GET  /participants/{tok}/next         -> presentation | session_break | done
//   POST /participants/{tok}/played       {presentation_ref}
//   POST /participants/{tok}/vote         {presentation_ref, vote}
//   POST /participants/{tok}/level        {offset_db}
//   GET  /audio/{ref}                     single-use WAV
// Errors are {"error": <code>, "message": ...} with a 4xx status.
HttpResponse HandleApiRequest(ListeningTestService& service, std::string_view method,
                              std::string_view path,
                              const std::map<std::string, std::string>& query,
                              std::string_view body);

int HttpStatusFor(ErrorCode code);

// Blocking HTTP server around HandleApiRequest; optionally serves a static
// UI bundle from `static_dir` under "/ui".
class HttpServer {
 public:
  explicit HttpServer(ListeningTestService& service,
                      const std::filesystem::path& static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after a successful Bind.
  bool Listen();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace speval

#endif  // SPEVAL_HTTP_API_H_
