// Copyright 2026 The Authors.
//
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

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(CLINCH_CLI_PATH) + " " + args +
                    " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string data_file(const std::string& name) {
  return std::string(CLINCH_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("run reports the tight example's welfare") {
  auto r = run_cli("run --instance " + data_file("tight_example.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"lw_pca\": \"1\"") != std::string::npos);
  CHECK(r.out.find("\"lw_opt\": \"2\"") != std::string::npos);
  CHECK(r.out.find("\"ratio_lw\": \"1/2\"") != std::string::npos);

  auto t = run_cli("run --instance " + data_file("tight_example.json") + " --format tsv");
  CHECK(t.exit_code == 0);
  CHECK(t.out.rfind("lw_pca\t", 0) == 0);
  CHECK(t.out.find("\n1\t2\t3\t1/2\t3/2\n") != std::string::npos);
}

TEST_CASE("generation is byte-identical per seed") {
  auto a = run_cli("gen --buyers 3 --sellers 2 --seed 7");
  auto b = run_cli("gen --buyers 3 --sellers 2 --seed 7");
  auto c = run_cli("gen --buyers 3 --sellers 2 --seed 8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("reproduce pins both examples and exits cleanly") {
  auto r = run_cli("reproduce");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("tight_example_lw") != std::string::npos);
  CHECK(r.out.find("sample_example_quarter") != std::string::npos);
  CHECK(r.out.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("verify exits with the check-report contract") {
  auto r = run_cli("verify --instance " + data_file("tight_example.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"exit_code\": 0") != std::string::npos);
}

TEST_CASE("usage and validation exit codes") {
  CHECK(run_cli("definitely-not-a-command").exit_code == 64);
  CHECK(run_cli("run").exit_code == 64);  // missing --instance

  // Epsilon override off the bid grid is refused as a validation error.
  auto r = run_cli("run --instance " + data_file("tight_example.json") + " --epsilon 1/3");
  CHECK(r.exit_code == 65);
}

TEST_CASE("single-sample run and trace export") {
  auto r = run_cli("single-sample --instance " + data_file("single_sample_example.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"lw\": \"1\"") != std::string::npos);

  std::string trace_path = std::string(CLINCH_TMP_DIR) + "/trace.ndjson";
  auto t = run_cli("run --instance " + data_file("tight_example.json") + " --trace " + trace_path +
                   " --output /dev/null");
  CHECK(t.exit_code == 0);
  std::ifstream trace(trace_path);
  REQUIRE(trace.good());
  std::string line;
  int clinch_lines = 0, lines = 0;
  while (std::getline(trace, line)) {
    ++lines;
    if (line.find("\"kind\":\"clinch\"") != std::string::npos) ++clinch_lines;
    CHECK(line.find("snapshot_digest") != std::string::npos);
  }
  CHECK(lines > 10);
  CHECK(clinch_lines == 1);
}

TEST_CASE("the ground guard is configurable through the environment") {
  auto r = run_cli("run --instance " + data_file("tight_example.json"));
  CHECK(r.exit_code == 0);
  // Three preprocessed buyers exceed a guard of 2.
  auto refused = run_cli("run --instance " + data_file("tight_example.json"),
                         "CLINCH_MAX_GROUND=2");
  CHECK(refused.exit_code == 1);
}

TEST_CASE("sweep emits one TSV row per instance") {
  auto r = run_cli("sweep --count 3 --seed 42 --buyers 2 --sellers 1 --format tsv");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (rows == 0 && line.rfind("seed\t", 0) == 0) header = true;
    ++rows;
  }
  CHECK(header);
  CHECK(rows == 4);
}
