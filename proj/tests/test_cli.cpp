#include <cstdio>
#include <string>

#include "doctest.h"

#ifndef NPIR_CLI_PATH
#error "NPIR_CLI_PATH must point at the built executable"
#endif

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(NPIR_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("bound output is byte-stable across formats") {
  RunResult table = run_cli("bound upper --M 3 --channels bsc:0.1,bsc:0.2");
  CHECK(table.code == 0);
  CHECK(table.out ==
        "value 0.218323085917723\n"
        "tau 0.411151175549484,0.588848824450516\n"
        "binding_seq 1,2\n");

  RunResult json = run_cli("bound upper --M 3 --channels bsc:0.1,bsc:0.2 --out json");
  CHECK(json.code == 0);
  CHECK(json.out ==
        "{\"binding_seq\":\"1,2\",\"tau\":[0.4111511755494838,0.5888488244505161],"
        "\"value\":0.2183230859177229}\n");

  RunResult lower = run_cli("bound lower --M 3 --channels bsc:0.1,bsc:0.2");
  CHECK(lower.code == 0);
  CHECK(lower.out ==
        "value 0.218323085917723\n"
        "seq 1,2,2\n");

  RunResult m3 = run_cli("bound m3 --channels bsc:0.1,bsc:0.2");
  CHECK(m3.code == 0);
  CHECK(m3.out == "value 0.218323085917723\n");

  // identical invocations must produce identical bytes
  CHECK(run_cli("bound upper --M 3 --channels bsc:0.1,bsc:0.2").out == table.out);
}

TEST_CASE("plan tables match the documented layouts") {
  RunResult r = run_cli("plan --M 3 --N 2 --seq 1,2,2");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "DB 1      DB 2 \n"
        "a1        a2+b1\n"
        "b1        a3+c1\n"
        "c1        b2+c2\n"
        "a4+b2+c2       \n");

  RunResult d2 = run_cli("plan --M 2 --N 2 --seq 1,2 --desired 2 --nu 2");
  CHECK(d2.code == 0);
  CHECK(d2.out ==
        "DB 1  DB 2 \n"
        "a1    a1+b2\n"
        "b1    a2+b4\n"
        "a2         \n"
        "b3         \n");

  // shuffled plans are seed-reproducible
  RunResult s1 = run_cli("plan --M 3 --N 2 --seq 1,2,2 --shuffled --seed 42");
  RunResult s2 = run_cli("plan --M 3 --N 2 --seq 1,2,2 --shuffled --seed 42");
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("simulation reports are deterministic JSON") {
  std::string args = "simulate npir --M 2 --N 2 --channels bsc:0,bsc:0 --margin 0 --nu 2 --seed 5";
  RunResult r = run_cli(args);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "{\"L\":4,\"decode_failures\":0,\"desired_index\":1,\"errors\":0,"
        "\"rate\":0.6666666666666666,\"seed\":5,\"t_per_db\":[4,2],\"t_total\":6,"
        "\"target_rate\":0.6666666666666666,\"trials\":1}\n");
  CHECK(run_cli(args).out == r.out);

  RunResult add = run_cli("simulate mac-add --M 2 --L 4 --p 0 --seed 9");
  CHECK(add.code == 0);
  CHECK(add.out.find("\"rate\":1.0") != std::string::npos);
  CHECK(add.out.find("\"t_total\":4") != std::string::npos);
}

TEST_CASE("decode failures flip the exit code when a threshold is set") {
  RunResult r = run_cli(
      "simulate npir --M 2 --N 2 --channels bsc:0.5,bsc:0.5 --nu 1 --fail-threshold 0 --seed 3");
  CHECK(r.code == 3);
  CHECK(r.out.find("\"decode_failures\":1") != std::string::npos);

  RunResult ok = run_cli(
      "simulate npir --M 2 --N 2 --channels bsc:0,bsc:0 --margin 0 --nu 1 --fail-threshold 0");
  CHECK(ok.code == 0);
}

TEST_CASE("sweeps emit the pinned CSV headers") {
  RunResult region = run_cli("sweep region --grid 0.25");
  CHECK(region.code == 0);
  CHECK(region.out.rfind("p1,p2,region\n", 0) == 0);
  CHECK(region.out.find("0,0,RATIO_4_3\n") != std::string::npos);
  CHECK(region.out.find("0,0.25,DB1_ONLY\n") != std::string::npos);

  RunResult cap = run_cli("sweep capacity --grid 0.25");
  CHECK(cap.code == 0);
  CHECK(cap.out.rfind("p1,p2,capacity\n", 0) == 0);
  CHECK(cap.out.find("0,0,0.571428571429\n") != std::string::npos);
  CHECK(cap.out.find("0.5,0.5,0\n") != std::string::npos);

  RunResult len = run_cli(
      "sweep blocklength --M 2 --N 2 --channels bsc:0,bsc:0 --margin 0 --nu 1,2 --trials 4");
  CHECK(len.code == 0);
  CHECK(len.out ==
        "nu,success_rate,empirical_rate\n"
        "1,1,0.666666666667\n"
        "2,1,0.666666666667\n");
}

TEST_CASE("privacy verification splits pass and fail by exit code") {
  RunResult pass = run_cli("verify privacy --protocol scheme --M 2 --N 2 --quiet");
  CHECK(pass.code == 0);
  CHECK(pass.out == "PASS max_tv 0\n");

  RunResult one = run_cli("verify privacy --protocol scheme --M 3 --N 2 --seq 1,2,2");
  CHECK(one.code == 0);
  CHECK(one.out ==
        "seq 1,2,2 tv 0\n"
        "PASS max_tv 0\n");

  for (const char* proto : {"additive", "conjunction", "disjunction", "selection"}) {
    RunResult r = run_cli(std::string("verify privacy --protocol ") + proto + " --M 3 --quiet");
    CHECK(r.code == 0);
    CHECK(r.out == "PASS max_tv 0\n");
  }

  RunResult fail = run_cli("verify privacy --protocol broken-demo --M 2 --quiet");
  CHECK(fail.code == 2);
  CHECK(fail.out == "FAIL max_tv 1\n");
}

TEST_CASE("usage errors exit with one") {
  CHECK(run_cli("", true).code == 1);
  CHECK(run_cli("bogus", true).code == 1);
  CHECK(run_cli("bound upper --channels bsc:0.1", true).code == 1);  // missing --M

  RunResult bad = run_cli("simulate npir --M 2 --N 2 --channels zzz --nu 1", true);
  CHECK(bad.code == 1);
  CHECK(bad.out.rfind("error:", 0) == 0);
}
