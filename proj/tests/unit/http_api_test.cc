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

#include <fstream>
#include <map>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "experiment_fixture.h"
#include "gtest/gtest.h"
#include "test_signals.h"

namespace speval {
namespace {

using json = nlohmann::json;
using ::speval::testing::MakeExperiment;
using ::speval::testing::ScratchDir;

class HttpApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::make_unique<ScratchDir>("http");
    def_ = MakeExperiment(dir_->path() / "audio");
    ListeningTestService::Options o;
    o.data_dir = dir_->path() / "state";
    svc_ = std::make_unique<ListeningTestService>(o);
  }

  HttpResponse Call(std::string_view method, const std::string& path, const std::string& body = "",
                    const std::map<std::string, std::string>& query = {}) {
    return HandleApiRequest(*svc_, method, path, query, body);
  }
  static json Body(const HttpResponse& r) { return json::parse(r.body); }

  std::string CreateAndEnroll(std::string* token) {
    const HttpResponse c = Call("POST", "/experiments", ExperimentDefinitionToJson(def_));
    EXPECT_EQ(c.status, 201);
    const std::string id = Body(c).at("experiment_id");
    const HttpResponse e = Call("POST", "/experiments/" + id + "/enroll", "");
    EXPECT_EQ(e.status, 201);
    *token = Body(e).at("token");
    return id;
  }

  std::unique_ptr<ScratchDir> dir_;
  ExperimentDefinition def_;
  std::unique_ptr<ListeningTestService> svc_;
};

TEST_F(HttpApiTest, StatusMapping) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNotEnrolled), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kAlreadyPlayed), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kPanelFull), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kInvalidVote), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kParseError), 400);
}

TEST_F(HttpApiTest, CreateRejectsInvalidDefinitions) {
  ExperimentDefinition three = def_;
  three.panels.pop_back();
  const HttpResponse r = Call("POST", "/experiments", ExperimentDefinitionToJson(three));
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Body(r).at("error"), "ValidationError");
  EXPECT_EQ(Call("POST", "/experiments", "{nope").status, 400);
  EXPECT_EQ(Call("GET", "/nothing").status, 404);
  EXPECT_EQ(Call("POST", "/experiments/exp-x/enroll").status, 404);
}

TEST_F(HttpApiTest, PresentationFlow) {
  std::string token;
  const std::string id = CreateAndEnroll(&token);
  const HttpResponse n = Call("GET", "/participants/" + token + "/next");
  ASSERT_EQ(n.status, 200);
  const json step = Body(n);
  EXPECT_EQ(step.at("type"), "presentation");
  EXPECT_EQ(step.at("labels").size(), 5u);
  EXPECT_TRUE(step.at("practice").get<bool>());
  const std::string ref = step.at("presentation_ref");
  EXPECT_EQ(step.at("audio_url"), "/audio/" + ref);

  const json vote3 = {{"presentation_ref", ref}, {"vote", 3}};
  EXPECT_EQ(Body(Call("POST", "/participants/" + token + "/vote", vote3.dump())).at("error"),
            "NotPlayedYet");
  const HttpResponse audio = Call("GET", "/audio/" + ref);
  EXPECT_EQ(audio.status, 200);
  EXPECT_EQ(audio.content_type, "audio/wav");
  EXPECT_EQ(audio.body.substr(0, 4), "RIFF");
  EXPECT_EQ(Call("GET", "/audio/" + ref).status, 409);

  const json played = {{"presentation_ref", ref}};
  EXPECT_EQ(Call("POST", "/participants/" + token + "/played", played.dump()).status, 200);
  EXPECT_EQ(Call("POST", "/participants/" + token + "/played", played.dump()).status, 409);
  EXPECT_EQ(Call("POST", "/participants/" + token + "/played", "{}").status, 400);

  for (const json& bad : {json{{"presentation_ref", ref}, {"vote", 6}},
                          json{{"presentation_ref", ref}, {"vote", 2.5}},
                          json{{"presentation_ref", ref}, {"vote", "3"}}}) {
    const HttpResponse r = Call("POST", "/participants/" + token + "/vote", bad.dump());
    EXPECT_EQ(r.status, 422) << bad;
    EXPECT_EQ(Body(r).at("error"), "InvalidVote");
  }
  const HttpResponse v = Call("POST", "/participants/" + token + "/vote", vote3.dump());
  ASSERT_EQ(v.status, 200);
  EXPECT_EQ(Body(v).at("next").at("presentation_index"), 2);
  EXPECT_EQ(Body(Call("POST", "/participants/" + token + "/vote", vote3.dump())).at("error"),
            "DuplicateVote");

  EXPECT_EQ(Call("POST", "/participants/" + token + "/level", R"({"offset_db": 0.7})").status, 200);
  EXPECT_EQ(Call("POST", "/participants/" + token + "/level", R"({"offset_db": -7})").status, 422);
  EXPECT_EQ(Call("GET", "/participants/nobody/next").status, 404);

  const HttpResponse jsonl = Call("GET", "/experiments/" + id + "/export", "", {{"format", "jsonl"}});
  EXPECT_EQ(jsonl.content_type, "application/x-ndjson");
  EXPECT_EQ(json::parse(jsonl.body.substr(0, jsonl.body.find('\n'))).at("vote"), 3);
  const HttpResponse csv = Call("GET", "/experiments/" + id + "/export", "", {{"format", "mos_csv"}});
  EXPECT_EQ(csv.content_type, "text/csv");
  const json full = Body(Call("GET", "/experiments/" + id + "/export"));
  EXPECT_TRUE(full.is_object());
  EXPECT_EQ(Call("GET", "/experiments/" + id + "/export", "", {{"format", "xml"}}).status, 400);
}

TEST_F(HttpApiTest, PanelFullIsConflict) {
  std::string token;
  const std::string id = CreateAndEnroll(&token);
  const json body = {{"panel_id", "panel2"}};
  for (int i = 0; i < kSlotsPerPanel; ++i) {
    EXPECT_EQ(Call("POST", "/experiments/" + id + "/enroll", body.dump()).status, 201);
  }
  const HttpResponse r = Call("POST", "/experiments/" + id + "/enroll", body.dump());
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(Body(r).at("error"), "PanelFull");
}

TEST_F(HttpApiTest, ServesOverSocket) {
  const auto ui = dir_->path() / "ui";
  std::filesystem::create_directories(ui);
  std::ofstream(ui / "index.html") << "<html>ok</html>";

  HttpServer server(*svc_, ui);
  const int port = server.Bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.Listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);

  auto created = client.Post("/experiments", ExperimentDefinitionToJson(def_), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body).at("experiment_id");
  auto enrolled = client.Post("/experiments/" + id + "/enroll", "{}", "application/json");
  ASSERT_TRUE(enrolled);
  const std::string token = json::parse(enrolled->body).at("token");
  auto next = client.Get("/participants/" + token + "/next");
  ASSERT_TRUE(next);
  const std::string ref = json::parse(next->body).at("presentation_ref");
  auto audio = client.Get("/audio/" + ref);
  ASSERT_TRUE(audio);
  EXPECT_EQ(audio->status, 200);
  EXPECT_EQ(audio->get_header_value("Content-Type"), "audio/wav");
  EXPECT_EQ(audio->get_header_value("Cache-Control"), "no-store");
  auto again = client.Get("/audio/" + ref);
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 409);
  auto export_csv = client.Get("/experiments/" + id + "/export?format=mos_csv");
  ASSERT_TRUE(export_csv);
  EXPECT_EQ(export_csv->status, 200);
  auto page = client.Get("/ui/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->body, "<html>ok</html>");

  server.Stop();
  t.join();
  EXPECT_FALSE(server.running());
}

}  // namespace
}  // namespace speval
