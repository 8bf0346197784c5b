#include "doctest.h"
#include "json.hpp"

#include "thompson/semiconj.hpp"
#include "thompson/transducer.hpp"
#include "thompson/velement.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

std::string chomp(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

Run run(std::initializer_list<std::string> args) {
  const std::string err_path = std::string(WORK_DIR) + "/cli_stderr.txt";
  std::string cmd = quote(CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>" + quote(err_path);
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = chomp(r.out);
  r.err = slurp(err_path);
  return r;
}

std::string ok(std::initializer_list<std::string> args) {
  const auto r = run(args);
  INFO(r.err);
  REQUIRE(r.status == 0);
  return r.out;
}

std::string work(const std::string& name) { return std::string(WORK_DIR) + "/" + name; }

const std::string kX0 = "0>00;10>01;11>1";
const std::string kX1 = "0>0;10>100;110>101;111>11";

}  // namespace

TEST_CASE("documented outputs") {
  CHECK(ok({"elem", "apply", "--el", kX0, "--pt", "1(0)"}) == "01(0)");
  CHECK(ok({"trans", "sync", "--machine", "paper-h"}) == "2");
  CHECK(ok({"pl", "cyclic", "--gens", "2,3"}) == "false");
}

TEST_CASE("elements") {
  CHECK(ok({"elem", "invert", "--el", kX0}) == "00>0;01>10;1>11");
  CHECK(ok({"elem", "germ", "--el", kX0, "--pt", "(0)"}) == "1");
  CHECK(ok({"elem", "germ", "--el", kX0, "--pt", "(1)"}) == "-1");
  CHECK(ok({"elem", "reduce", "--el", "1>1;0>0"}) == ">");
  CHECK(ok({"elem", "compose", "--el", kX0, "--el", "00>0;01>10;1>11"}) == ">");
  CHECK(ok({"--format", "json", "elem", "compose", "--el", kX0}) == R"({"element":"0>00;10>01;11>1"})");
  const auto s = json::parse(ok({"--format", "json", "elem", "support", "--el", kX1}));
  CHECK(s["cones"] == json::array({"1"}));
}

TEST_CASE("PL maps") {
  const std::string f = "bp: 1/2,3/4; sl: 1/2,1,2";
  CHECK(ok({"pl", "eval", "--pl", f, "--x", "1/3"}) == "1/6");
  CHECK(ok({"pl", "tov", "--pl", f}) == kX0);
  CHECK(ok({"pl", "member", "--family", "stein", "--pl", "bp: 1/3; sl: 3/2,3/4"}) == "true");
  CHECK(ok({"pl", "member", "--pl", "bp: 1/3; sl: 3/2,3/4"}) == "false");
  CHECK(ok({"pl", "member", "--slopes", "3", "--den", "3", "--pl", "bp: 1/4; sl: 3,1/3"}) == "false");
  CHECK(ok({"pl", "member", "--family", "stein", "--pl", "bp: 1/4; sl: 3,1/3"}) == "true");
  CHECK(ok({"pl", "member", "--family", "f3", "--pl", "bp: 2/3,7/9; sl: 1/3,1,3"}) == "true");
  CHECK(ok({"pl", "germs", "--pl", f}) == "1/2 2");
  CHECK(ok({"--format", "json", "pl", "cyclic", "--gens", "4,8"}) == R"({"cyclic":true,"generator":"2"})");
  const auto g = ok({"pl", "interp", "--pairs", "1/5:1/25", "--n", "5"});
  CHECK(ok({"pl", "eval", "--pl", g, "--x", "1/5"}) == "1/25");
  CHECK(ok({"pl", "member", "--family", "f5", "--pl", g}) == "true");
  CHECK(ok({"pl", "compose", "--pl", f, "--pl", ok({"pl", "topl", "--el", "00>0;01>10;1>11"})}) == "bp: ; sl: 1");
}

TEST_CASE("interpolation in F_3") {
  const auto g = ok({"pl", "interp", "--pairs", "1/3:1/9", "--n", "3"});
  CHECK(ok({"pl", "eval", "--pl", g, "--x", "1/3"}) == "1/9");
  CHECK(ok({"pl", "member", "--family", "f3", "--pl", g}) == "true");
}

TEST_CASE("exit codes") {
  SUBCASE("domain errors") {
    const auto r = run({"elem", "germ", "--el", kX0, "--pt", "1(0)"});
    CHECK(r.status == 1);
    CHECK(r.err.find("not fixed") != std::string::npos);
    CHECK(run({"pl", "eval", "--pl", "bp: 1/2,3/4; sl: 1/2,1,2", "--x", "2"}).status == 1);
    CHECK(run({"pl", "interp", "--pairs", "1/3:2/9", "--n", "3"}).status == 1);
    CHECK(run({"graph", "z2", "--first", kX0, "--second", kX1, "--pt", "1(0)"}).status == 1);
  }
  SUBCASE("usage errors name the flag") {
    const std::vector<std::tuple<Run, std::string>> cases{
        {run({"elem", "reduce", "--el", "0>00;1"}), "--el"},
        {run({"--format", "yaml", "elem", "reduce", "--el", "0>0;1>1"}), "--format"},
        {run({"--format", "dot", "pl", "cyclic", "--gens", "2"}), "--format"},
        {run({"trans", "sync", "--machine", "nowhere"}), "--machine"},
        {run({"graph", "bottleneck", "--pt", "1(0)", "--radius", "3", "--pairs", "5"}), "--seed"},
        {run({"phi", "equivariance", "--samples", "3"}), "--seed"},
        {run({"pl", "member", "--family", "fx", "--pl", "bp: ; sl: 1"}), "--family"},
        {run({"pl", "eval", "--pl", "bp: 1/2; sl: 1", "--x", "0"}), "--pl"},
        {run({"elem", "apply", "--el", kX0, "--pt", "1(2)"}), "--pt"},
        {run({"--depth", "-3", "phi", "bracket", "--point", "(01)"}), "--depth"},
    };
    for (const auto& [r, flag] : cases) {
      INFO(r.err);
      CHECK(r.status == 2);
      CHECK(r.err.find(flag) != std::string::npos);
    }
    CHECK(run({"elem"}).status == 2);
    CHECK(run({}).status == 2);
  }
}

TEST_CASE("emitted strings parse back") {
  const auto product = ok({"elem", "compose", "--el", kX0, "--el", kX1, "--el", "0>11;10>10;11>0"});
  ok({"--out", work("product.txt"), "elem", "compose", "--el", kX0, "--el", kX1, "--el", "0>11;10>10;11>0"});
  CHECK(ok({"--in", work("product.txt"), "elem", "reduce"}) == product);
  const auto inverse = ok({"--in", work("product.txt"), "elem", "invert"});
  CHECK(ok({"elem", "invert", "--el", inverse}) == product);
  CHECK(thompson::PrefixMap::parse(product).to_string() == product);

  for (const std::string f : {"bp: 1/2,3/4; sl: 1/2,1,2", "bp: 1/4,1/2; sl: 2,1,1/2", "bp: ; sl: 1"}) {
    CHECK(ok({"pl", "topl", "--el", ok({"pl", "tov", "--pl", f})}) == f);
  }

  // Machines written by compose are accepted as machine files.
  ok({"--out", work("once.json"), "trans", "compose", "--machine", "paper-h", "--machine", "identity"});
  CHECK(ok({"trans", "apply", "--machine", work("once.json"), "--pt", "011(01)"}) ==
        ok({"trans", "apply", "--machine", "paper-h", "--pt", "011(01)"}));
  ok({"--out", work("square.json"), "trans", "compose", "--machine", "paper-h", "--machine", "paper-h", "--minimize"});
  const auto once = ok({"trans", "apply", "--machine", "paper-h", "--pt", "1(10)"});
  CHECK(ok({"trans", "apply", "--machine", work("square.json"), "--pt", "1(10)"}) ==
        ok({"trans", "apply", "--machine", "paper-h", "--pt", once}));
  CHECK(ok({"trans", "apply", "--machine", "paper-h", "--inverse", "--pt", once}) == "1(10)");

  // Embeddings are read from their JSON file form.
  {
    auto e = thompson::Embedding::standard();
    e.depth_budget = 5;
    std::ofstream file(work("embedding.json"));
    file << e.to_json();
  }
  CHECK(ok({"phi", "--embedding", work("embedding.json"), "--point", "(01)"}) ==
        ok({"--depth", "5", "phi", "bracket", "--point", "(01)"}));
}

TEST_CASE("DOT and JSON describe the same graph") {
  for (const std::string cmd : {"qt", "schreier"}) {
    const auto dot = ok({"--format", "dot", "graph", cmd, "--pt", "1(0)", "--radius", "3"});
    const auto doc = json::parse(ok({"--format", "json", "graph", cmd, "--pt", "1(0)", "--radius", "3"}));

    std::set<std::pair<long, std::string>> dot_vertices, json_vertices;
    std::set<std::tuple<long, long, std::string>> dot_edges, json_edges;
    const std::regex vertex(R"re(^  v(\d+) \[label="([^"]*)"\];$)re");
    const std::regex edge(R"re(^  v(\d+) -> v(\d+) \[label="([^"]*)"\];$)re");
    std::istringstream lines(dot);
    std::string line;
    std::size_t vertex_lines = 0, edge_lines = 0;
    while (std::getline(lines, line)) {
      std::smatch m;
      if (std::regex_match(line, m, vertex)) {
        ++vertex_lines;
        dot_vertices.emplace(std::stol(m[1]), m[2]);
      } else if (std::regex_match(line, m, edge)) {
        ++edge_lines;
        dot_edges.emplace(std::stol(m[1]), std::stol(m[2]), m[3]);
      }
    }
    for (const auto& v : doc["vertices"]) json_vertices.emplace(v["id"].get<long>(), v["point"].get<std::string>());
    for (const auto& e : doc["edges"]) {
      json_edges.emplace(e["source"].get<long>(), e["target"].get<long>(), e["label"].get<std::string>());
    }
    CHECK(vertex_lines == doc["vertices"].size());
    CHECK(edge_lines == doc["edges"].size());
    CHECK(dot_vertices == json_vertices);
    CHECK(dot_edges == json_edges);
    CHECK(dot.rfind("digraph", 0) == 0);
  }
}

TEST_CASE("brackets") {
  CHECK(ok({"--format", "text", "phi", "bracket", "--point", "(01)"}) == "[21/64, 43/128]");
  CHECK(ok({"--format", "text", "phi", "--point", "(0)"}) == "infinity");
  CHECK(json::parse(ok({"phi", "--point", "(0)"}))["status"] == "infinity");
  const auto j = json::parse(ok({"--format", "json", "--depth", "5", "phi", "bracket", "--point", "(01)"}));
  CHECK(j["status"] == "interval");
  CHECK(j["depth"] == 5);
  const auto report = json::parse(ok({"--seed", "1", "--depth", "5", "phi", "equivariance", "--samples", "10"}));
  CHECK(report["violations"].empty());
  CHECK(ok({"--format", "text", "--seed", "1", "--depth", "5", "phi", "equivariance", "--samples", "10"}).find(
            "violations 0") != std::string::npos);
  const auto conj = ok({"--depth", "5", "phi", "bracket", "--conjugate-by", "paper-h", "--point", "(01)"});
  CHECK(json::parse(conj)["status"] == "interval");
}
