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

// speval-p835: listening-test service.
//
//   speval-p835 serve  --data-dir state/ [--host 127.0.0.1] [--port 8835] [--ui-dir dist/]
//   speval-p835 export --data-dir state/ --experiment exp-1234abcd --out export/

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "speval/http_api.h"
#include "speval/listening_test.h"
#include "tool_main.h"

namespace {

speval::HttpServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Listening-test service (three rating scales, single playback)"};
  app.require_subcommand(1);
  std::string data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8835;
  std::string ui_dir;
  bool fsync = false;
  serve->add_option("--data-dir", data_dir, "State directory (event log, snapshots)")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--ui-dir", ui_dir, "Static UI bundle served under /ui");
  serve->add_flag("--fsync", fsync, "fsync the event log after every event");

  auto* exp = app.add_subcommand("export", "Write votes.jsonl, mos.csv and completeness");
  std::string experiment;
  std::string out_dir;
  exp->add_option("--data-dir", data_dir, "State directory")->required();
  exp->add_option("--experiment", experiment, "Experiment id")->required();
  exp->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  return speval::tools::Guarded("speval-p835", [&]() -> int {
    speval::ListeningTestService::Options opt;
    opt.data_dir = data_dir;
    opt.fsync = fsync;
    speval::ListeningTestService service(opt);
    if (*exp) {
      const auto e = service.Export(experiment);
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / "votes.jsonl") << speval::VotesToJsonl(e.votes);
      std::ofstream(std::filesystem::path(out_dir) / "mos.csv") << speval::MosToCsv(e.mos);
      std::ofstream(std::filesystem::path(out_dir) / "export.json") << speval::ExportToJson(e);
      std::cout << e.actual_votes << " of " << e.expected_votes << " test votes ("
                << 100.0 * e.completeness() << "%)\n";
      return 0;
    }
    speval::HttpServer server(service, ui_dir);
    const int bound = server.Bind(host, port);
    if (bound < 0) {
      std::cerr << "speval-p835: cannot bind " << host << ':' << port << '\n';
      return 1;
    }
    g_server = &server;
    std::signal(SIGINT, HandleSignal);
    std::signal(SIGTERM, HandleSignal);
    std::cout << "listening on http://" << host << ':' << bound << std::endl;
    server.Listen();
    service.Snapshot();
    return 0;
  });
}
