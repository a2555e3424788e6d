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

#include "speval/http_api.h"

#include <atomic>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace speval {

using json = nlohmann::json;

namespace {

HttpResponse Json(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

HttpResponse ErrorResponse(ErrorCode code, const std::string& message) {
  return Json(HttpStatusFor(code),
              {{"error", std::string(ErrorCodeName(code))}, {"message", message}});
}

json StepToJson(const NextStep& s) {
  switch (s.kind) {
    case NextStep::Kind::kDone:
      return {{"type", "done"}};
    case NextStep::Kind::kSessionBreak:
      return {{"type", "session_break"},
              {"completed_session", s.completed_session},
              {"next_session", s.completed_session + 1}};
    case NextStep::Kind::kPresentation:
      break;
  }
  return {{"type", "presentation"},
          {"presentation_ref", s.presentation_ref},
          {"audio_url", "/audio/" + s.presentation_ref},
          {"scale", std::string(RatingScaleName(s.scale))},
          {"instruction", s.instruction},
          {"labels", ScaleLabels(s.scale)},
          {"slider_initial_position", s.slider_initial_position},
          {"session_index", s.session_index},
          {"trial_index", s.trial_index},
          {"trials_in_session", s.trials_in_session},
          {"presentation_index", s.presentation_index},
          {"practice", s.practice},
          {"played", s.played},
          {"level_offset_db", s.level_offset_db}};
}

std::vector<std::string> SplitPath(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    i = end;
  }
  return parts;
}

json ParseBody(std::string_view body, bool allow_empty) {
  if (body.empty() && allow_empty) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParseError, "request body must be a JSON object");
  }
  return j;
}

std::string RequiredString(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::kParseError, std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) {
    throw Error(ErrorCode::kParseError, std::string("field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

HttpResponse Route(ListeningTestService& svc, std::string_view method,
                   const std::vector<std::string>& p,
                   const std::map<std::string, std::string>& query, std::string_view body) {
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (post && p.size() == 1 && p[0] == "experiments") {
    const std::string id = svc.CreateExperiment(ParseExperimentDefinition(std::string(body)));
    return Json(201, {{"experiment_id", id}});
  }
  if (p.size() == 3 && p[0] == "experiments") {
    if (post && p[2] == "enroll") {
      const json j = ParseBody(body, true);
      const Enrollment e = svc.Enroll(p[1], OptionalString(j, "panel_id"),
                                      OptionalString(j, "participant_id"));
      return Json(201, {{"token", e.token},
                        {"participant_id", e.participant_id},
                        {"panel_id", e.panel_id},
                        {"slot", e.slot},
                        {"scale_order", e.scale_order == ScaleOrder::kSigFirst ? "SIG_FIRST"
                                                                                : "BAK_FIRST"}});
    }
    if (get && p[2] == "export") {
      const ExperimentExport ex = svc.Export(p[1]);
      auto it = query.find("format");
      const std::string format = it == query.end() ? "json" : it->second;
      if (format == "jsonl") return {200, "application/x-ndjson", VotesToJsonl(ex.votes)};
      if (format == "mos_csv") return {200, "text/csv", MosToCsv(ex.mos)};
      if (format == "json") return {200, "application/json", ExportToJson(ex)};
      throw Error(ErrorCode::kInvalidArgument, "format must be json, jsonl or mos_csv");
    }
  }
  if (p.size() == 3 && p[0] == "participants") {
    const std::string& token = p[1];
    if (get && p[2] == "next") return Json(200, StepToJson(svc.Next(token)));
    if (post && p[2] == "played") {
      svc.MarkPlayed(token, RequiredString(ParseBody(body, false), "presentation_ref"));
      return Json(200, {{"ok", true}});
    }
    if (post && p[2] == "vote") {
      const json j = ParseBody(body, false);
      const std::string ref = RequiredString(j, "presentation_ref");
      if (!j.contains("vote") || !j["vote"].is_number_integer()) {
        throw Error(ErrorCode::kInvalidVote, "vote must be an integer in 1..5");
      }
      const long long vote = j["vote"].get<long long>();
      if (vote < 1 || vote > 5) throw Error(ErrorCode::kInvalidVote, "vote must be in 1..5");
      const NextStep next = svc.SubmitVote(token, ref, static_cast<int>(vote));
      return Json(200, {{"recorded", true}, {"next", StepToJson(next)}});
    }
    if (post && p[2] == "level") {
      const json j = ParseBody(body, false);
      if (!j.contains("offset_db") || !j["offset_db"].is_number()) {
        throw Error(ErrorCode::kParseError, "missing numeric field 'offset_db'");
      }
      svc.SetLevelOffset(token, j["offset_db"].get<double>());
      return Json(200, {{"ok", true}, {"offset_db", j["offset_db"]}});
    }
  }
  if (get && p.size() == 2 && p[0] == "audio") {
    const AudioPayload audio = svc.FetchAudio(p[1]);
    return {200, "audio/wav", std::string(audio.wav_bytes.begin(), audio.wav_bytes.end())};
  }
  return Json(404, {{"error", "NotFound"}, {"message", "no such endpoint"}});
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kNotEnrolled:
    case ErrorCode::kFileNotFound:
      return 404;
    case ErrorCode::kAlreadyPlayed:
    case ErrorCode::kDuplicateVote:
    case ErrorCode::kOutOfOrder:
    case ErrorCode::kNotPlayedYet:
    case ErrorCode::kPanelFull:
      return 409;
    case ErrorCode::kValidationError:
    case ErrorCode::kInvalidVote:
    case ErrorCode::kOutOfRange:
      return 422;
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

HttpResponse HandleApiRequest(ListeningTestService& service, std::string_view method,
                              std::string_view path,
                              const std::map<std::string, std::string>& query,
                              std::string_view body) {
  try {
    return Route(service, method, SplitPath(path), query, body);
  } catch (const Error& e) {
    return ErrorResponse(e.code(), e.what());
  } catch (const std::exception& e) {
    return Json(500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

struct HttpServer::Impl {
  ListeningTestService* service;
  httplib::Server server;
};

HttpServer::HttpServer(ListeningTestService& service, const std::filesystem::path& static_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = &service;
  auto& srv = impl_->server;
  if (!static_dir.empty()) srv.set_mount_point("/ui", static_dir.string());
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const HttpResponse r = HandleApiRequest(*impl_->service, req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_header("Cache-Control", "no-store");
    res.set_content(r.body, r.content_type);
  };
  for (const char* pattern : {R"(/experiments(/.*)?)", R"(/participants/.*)", R"(/audio/.*)"}) {
    srv.Get(pattern, handler);
    srv.Post(pattern, handler);
  }
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Listen() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace speval
