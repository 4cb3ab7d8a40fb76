// Drives the installed binary end-to-end at desk scale.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(QAOAINIT_BIN) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

const std::string kTinyGen =
    "gen-data --count 4 --n-min 4 --n-max 5 --n-starts 2 --iters 20";

}  // namespace

TEST_CASE("print-config dumps JSON and exits 0") {
  CHECK(run("--print-config") == 0);
  const std::string out = read_file_bytes("cli_stdout.txt");
  CHECK(out.find("\"gen_data\"") != std::string::npos);
  CHECK(out.find("\"eval\"") != std::string::npos);
}

TEST_CASE("no subcommand is a usage error") {
  CHECK(run("") == 2);
  CHECK(run("bogus-subcommand") == 2);
}

TEST_CASE("gen-data: determinism and count validation") {
  CHECK(run(kTinyGen + " --seed 1 --out cli_c1.jsonl") == 0);
  CHECK(run(kTinyGen + " --seed 1 --out cli_c2.jsonl") == 0);
  CHECK(read_file_bytes("cli_c1.jsonl") == read_file_bytes("cli_c2.jsonl"));
  CHECK(!read_file_bytes("cli_c1.jsonl").empty());

  CHECK(run("gen-data --count 0 --seed 1 --out cli_zero.jsonl") == 2);
}

TEST_CASE("full pipeline: train, sample, eval, self-check") {
  REQUIRE(run(kTinyGen + " --seed 5 --out cli_corpus.jsonl") == 0);

  REQUIRE(run("train --corpus cli_corpus.jsonl --out cli_model.ckpt --epochs 3 "
              "--batch-size 2 --T 20 --seed 6") == 0);
  const std::string loss = read_file_bytes("cli_model.ckpt.loss.csv");
  CHECK(loss.rfind("epoch,mean_loss", 0) == 0);
  CHECK(std::count(loss.begin(), loss.end(), '\n') == 4);  // header + 3 epochs

  // byte-identical checkpoints under the same seed
  REQUIRE(run("train --corpus cli_corpus.jsonl --out cli_model2.ckpt --epochs 3 "
              "--batch-size 2 --T 20 --seed 6") == 0);
  CHECK(read_file_bytes("cli_model.ckpt") == read_file_bytes("cli_model2.ckpt"));

  CHECK(run("sample --checkpoint cli_model.ckpt --count 5 --seed 7 --out cli_samples.csv") == 0);
  const std::string samples = read_file_bytes("cli_samples.csv");
  CHECK(samples.rfind("gamma1,gamma2,gamma3,beta1,beta2,beta3", 0) == 0);
  CHECK(std::count(samples.begin(), samples.end(), '\n') == 6);

  CHECK(run("eval --checkpoint cli_model.ckpt --count 4 --n-min 4 --n-max 5 "
            "--refine-iters 10 --k 2 --seed 8 --out cli_eval") == 0);
  CHECK(!read_file_bytes("cli_eval.report.json").empty());
  CHECK(!read_file_bytes("cli_eval.per_instance.csv").empty());
  CHECK(!read_file_bytes("cli_eval.convergence.csv").empty());

  CHECK(run("eval --checkpoint cli_model.ckpt --count 4 --n-min 4 --n-max 5 "
            "--refine-iters 10 --k 2 --seed 8 --out cli_selfeval --self-check") == 0);
  const std::string report = read_file_bytes("cli_selfeval.report.json");
  CHECK(report.find("\"mean_ratio\": 1.0") != std::string::npos);

  // missing checkpoint is an I/O failure
  CHECK(run("eval --checkpoint cli_nope.ckpt --count 1 --seed 1 --out cli_x") == 3);
  CHECK(run("train --corpus cli_nope.jsonl --out cli_x.ckpt --seed 1") == 3);
}

TEST_CASE("oracle subcommand on known instances") {
  write_file("cli_k3.json", R"({"n":3,"edges":[[0,1],[0,2],[1,2]]})");
  CHECK(run("oracle --graph cli_k3.json") == 0);
  std::string out = read_file_bytes("cli_stdout.txt");
  CHECK(out.find("max_cut: 2") != std::string::npos);
  CHECK(out.find("ground_energy: -1") != std::string::npos);

  write_file("cli_c4.json", R"({"n":4,"edges":[[0,1],[0,3],[1,2],[2,3]]})");
  CHECK(run("oracle --graph cli_c4.json") == 0);
  out = read_file_bytes("cli_stdout.txt");
  CHECK(out.find("max_cut: 4") != std::string::npos);
  CHECK(out.find("ground_energy: -4") != std::string::npos);

  CHECK(run("oracle --graph cli_missing.json") == 3);
  write_file("cli_bad.json", "{not json");
  CHECK(run("oracle --graph cli_bad.json") == 4);
}

TEST_CASE("omitted seed prints the chosen one") {
  REQUIRE(run("sample --checkpoint cli_model.ckpt --count 1 --out cli_s2.csv") == 0);
  CHECK(read_file_bytes("cli_stdout.txt").find("seed:") != std::string::npos);

  for (const char* f :
       {"cli_c1.jsonl", "cli_c1.manifest.json", "cli_c2.jsonl", "cli_c2.manifest.json",
        "cli_corpus.jsonl", "cli_corpus.manifest.json", "cli_model.ckpt",
        "cli_model.ckpt.loss.csv", "cli_model2.ckpt", "cli_model2.ckpt.loss.csv",
        "cli_samples.csv", "cli_eval.report.json", "cli_eval.per_instance.csv",
        "cli_eval.convergence.csv", "cli_selfeval.report.json",
        "cli_selfeval.per_instance.csv", "cli_selfeval.convergence.csv", "cli_k3.json",
        "cli_c4.json", "cli_bad.json", "cli_s2.csv", "cli_stdout.txt", "cli_stderr.txt"}) {
    std::remove(f);
  }
}
