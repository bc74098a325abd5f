#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(JTAB_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string sample(const char* name) { return std::string(JTAB_SAMPLES) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("jtab_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(Cli, ProveExample) {
  auto r = run("prove --logic J --cs " + sample("example.cs") + " \"x:P -> c*x:(Q->P)\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_GE(count_of(r.out, "⊗"), 1u);
}

TEST(Cli, ProveJsonSchema) {
  auto r = run("prove --logic J --cs " + sample("example.cs") + " --format json \"x:P -> c*x:(Q->P)\"");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "valid");
  EXPECT_TRUE(j["proof"]["nodes"].is_array());
}

TEST(Cli, NonTheoremModel) {
  auto r = run("prove --logic J --format json \"P -> t:P\"");
  ASSERT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["model"]["valuation"]["P"], true);
  EXPECT_TRUE(j["model"]["evidence"].empty());
  auto m = run("countermodel --logic J \"P -> t:P\"");
  EXPECT_EQ(m.code, 1);
  EXPECT_EQ(nlohmann::json::parse(m.out)["valuation"]["P"], true);
}

TEST(Cli, FactivityValidInJT) { EXPECT_EQ(run("prove --logic JT \"t:P -> P\"").code, 0); }

TEST(Cli, DecideIsQuiet) {
  auto r = run("decide --logic J \"x:P -> P\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ResourceOut) {
  auto r = run("prove --logic J --cs " + sample("example.cs") + " --max-nodes 2 \"x:P -> c*x:(Q->P)\"");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ConfigErrorsPrintNothing) {
  const std::vector<std::string> cases = {
      std::string("prove --logic K \"P\""), std::string("prove --logic J \"P ->\""),
        std::string("prove --logic J \"x:P -> !x:x:P\""), std::string("prove --logic J --format xml \"P\""),
        "prove --logic J --cs /nonexistent.cs \"P\"", std::string("prove --logic J"),
        "prove --logic J --cs " + temp_file("bad.cs", "c:(P -> Q)\n") + " \"P\"",
        std::string("project --logic JT45 \"x:P -> P\"")};
  for (const auto& args : cases) {
    auto r = run(args);
    EXPECT_EQ(r.code, 3) << args;
    EXPECT_TRUE(r.out.empty()) << args;
  }
}

TEST(Cli, ValidateCs) {
  EXPECT_EQ(run("validate-cs --logic J --cs " + sample("example.cs")).code, 0);
  auto bad = temp_file("down.cs", "d:c:(P -> (Q -> P))\n");
  EXPECT_EQ(run("validate-cs --logic J --cs " + bad).code, 3);
  auto jt = temp_file("jt.cs", "c:(t:P -> P)\n");
  EXPECT_EQ(run("validate-cs --logic J --cs " + jt).code, 3);
  EXPECT_EQ(run("validate-cs --logic JT --cs " + jt).code, 0);
}

TEST(Cli, CutelimMp) {
  auto r = run("cutelim --logic J " + sample("mp.hil"));
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(count_of(r.out, "case="), 2u);
}

TEST(Cli, CutelimBrokenAndIan) {
  EXPECT_EQ(run("cutelim --logic J " + sample("broken.hil")).code, 3);
  auto r = run("cutelim --logic J --cs " + sample("example.cs") + " " + sample("ian.hil"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["nodes"].size(), 1u);
}

TEST(Cli, CompileAndAudit) {
  auto r = run("compile-hilbert --logic J --cs " + sample("example.cs") + " --format json " + sample("example.hil"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"cut\""), std::string::npos);
  auto compiled = temp_file("compiled.json", r.out);
  EXPECT_EQ(run("audit --logic J --cs " + sample("example.cs") + " " + compiled).code, 1);

  auto p = run("prove --logic J --cs " + sample("example.cs") + " --format json \"x:P -> c*x:(Q->P)\"");
  auto proof = temp_file("proof.json", p.out);
  auto a = run("audit --logic J --cs " + sample("example.cs") + " " + proof);
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("subformula property: accept"), std::string::npos);
}

TEST(Cli, DotFormat) {
  auto r = run("prove --logic J --cs " + sample("example.cs") + " --format dot \"x:P -> c*x:(Q->P)\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
}

TEST(Cli, Project) {
  auto r = run("project --logic JT \"x:P -> P\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[]P"), std::string::npos);
  EXPECT_EQ(run("project --logic J \"x:P -> P\"").code, 1);
}

TEST(Cli, GoalFileAndJobs) {
  auto one = run("prove --logic J --goal-file " + sample("goals.txt"));
  auto four = run("prove --logic J --jobs 4 --goal-file " + sample("goals.txt"));
  EXPECT_EQ(one.code, four.code);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(count_of(one.out, "\n"), 3u);
}

TEST(Cli, SeededCorpusDeterministic) {
  auto a = run("decide --logic JT --seed 7 --count 20");
  auto b = run("prove --logic JT --seed 7 --count 20 --jobs 3");
  auto c = run("prove --logic JT --seed 7 --count 20");
  EXPECT_NE(a.code, 3);
  EXPECT_EQ(b.out, c.out);
  EXPECT_EQ(count_of(c.out, "\n"), 20u);
}
