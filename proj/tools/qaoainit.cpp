// qaoainit: mine QAOA parameter corpora, train the diffusion initializer,
// sample initializations, and run the head-to-head evaluation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qinit/dataset.hpp"
#include "qinit/ddpm.hpp"
#include "qinit/errors.hpp"
#include "qinit/eval.hpp"
#include "qinit/graph.hpp"
#include "qinit/qaoa_opt.hpp"
#include "qinit/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

using nlohmann::json;

// Every tunable default in one place; --config overrides it from JSON,
// explicit flags override both.
struct Config {
  qinit::CorpusManifest gen;        // gen-data defaults (full-scale corpus count)
  int ddpm_T = 100;
  qinit::TrainConfig train;
  qinit::EvalConfig eval;
};

Config default_config() {
  Config c;
  c.gen.count = 3500;
  c.eval.refine.learning_rate = c.gen.optimizer.learning_rate;
  return c;
}

json config_to_json(const Config& c) {
  json j;
  j["gen_data"] = {{"count", c.gen.count},
                   {"n_range", {c.gen.n_min, c.gen.n_max}},
                   {"p_range", {c.gen.p_min, c.gen.p_max}},
                   {"n_starts", c.gen.n_starts},
                   {"optimizer",
                    {{"max_iters", c.gen.optimizer.max_iters},
                     {"learning_rate", c.gen.optimizer.learning_rate},
                     {"adam_beta1", c.gen.optimizer.adam_beta1},
                     {"adam_beta2", c.gen.optimizer.adam_beta2},
                     {"adam_eps", c.gen.optimizer.adam_eps}}}};
  j["train"] = {{"T", c.ddpm_T},
                {"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"learning_rate", c.train.learning_rate}};
  j["eval"] = {{"count", c.eval.count},
               {"n_range", {c.eval.n_min, c.eval.n_max}},
               {"p_range", {c.eval.p_min, c.eval.p_max}},
               {"refine_iters", c.eval.refine_iters},
               {"k_per_arm", c.eval.k_per_arm},
               {"refine_learning_rate", c.eval.refine.learning_rate}};
  return j;
}

void apply_config_json(const json& j, Config& c) {
  if (j.contains("gen_data")) {
    const auto& g = j["gen_data"];
    if (g.contains("count")) c.gen.count = g["count"].get<int>();
    if (g.contains("n_range")) {
      c.gen.n_min = g["n_range"].at(0).get<int>();
      c.gen.n_max = g["n_range"].at(1).get<int>();
    }
    if (g.contains("p_range")) {
      c.gen.p_min = g["p_range"].at(0).get<double>();
      c.gen.p_max = g["p_range"].at(1).get<double>();
    }
    if (g.contains("n_starts")) c.gen.n_starts = g["n_starts"].get<int>();
    if (g.contains("optimizer")) {
      const auto& o = g["optimizer"];
      if (o.contains("max_iters")) c.gen.optimizer.max_iters = o["max_iters"].get<int>();
      if (o.contains("learning_rate"))
        c.gen.optimizer.learning_rate = o["learning_rate"].get<double>();
      if (o.contains("adam_beta1")) c.gen.optimizer.adam_beta1 = o["adam_beta1"].get<double>();
      if (o.contains("adam_beta2")) c.gen.optimizer.adam_beta2 = o["adam_beta2"].get<double>();
      if (o.contains("adam_eps")) c.gen.optimizer.adam_eps = o["adam_eps"].get<double>();
    }
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    if (t.contains("T")) c.ddpm_T = t["T"].get<int>();
    if (t.contains("epochs")) c.train.epochs = t["epochs"].get<int>();
    if (t.contains("batch_size")) c.train.batch_size = t["batch_size"].get<int>();
    if (t.contains("learning_rate")) c.train.learning_rate = t["learning_rate"].get<double>();
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    if (e.contains("count")) c.eval.count = e["count"].get<int>();
    if (e.contains("n_range")) {
      c.eval.n_min = e["n_range"].at(0).get<int>();
      c.eval.n_max = e["n_range"].at(1).get<int>();
    }
    if (e.contains("p_range")) {
      c.eval.p_min = e["p_range"].at(0).get<double>();
      c.eval.p_max = e["p_range"].at(1).get<double>();
    }
    if (e.contains("refine_iters")) c.eval.refine_iters = e["refine_iters"].get<int>();
    if (e.contains("k_per_arm")) c.eval.k_per_arm = e["k_per_arm"].get<int>();
    if (e.contains("refine_learning_rate"))
      c.eval.refine.learning_rate = e["refine_learning_rate"].get<double>();
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cout << "seed: " << s << " (from entropy; pass --seed to reproduce)\n";
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw qinit::IoError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

int run(int argc, char** argv) {
  CLI::App app{"QAOA Max-Cut parameter mining and diffusion-based initialization"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // allow --seed/--config after the subcommand name

  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON config file overriding built-in defaults");
  app.add_flag("--print-config", print_config, "Dump the effective default config as JSON");

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Master RNG seed (omitted: drawn from entropy and printed)");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Mine a training corpus of (graph, params) records");
  std::string gen_out = "corpus.jsonl";
  std::optional<int> gen_count, gen_nmin, gen_nmax, gen_nstarts, gen_iters;
  std::optional<double> gen_pmin, gen_pmax;
  gen->add_option("--out", gen_out, "Corpus output path (line-delimited JSON)");
  gen->add_option("--count", gen_count, "Number of records to mine");
  gen->add_option("--n-min", gen_nmin, "Smallest node count");
  gen->add_option("--n-max", gen_nmax, "Largest node count");
  gen->add_option("--p-min", gen_pmin, "Lower edge probability");
  gen->add_option("--p-max", gen_pmax, "Upper edge probability");
  gen->add_option("--n-starts", gen_nstarts, "Multi-start count per graph");
  gen->add_option("--iters", gen_iters, "Optimizer iterations per start");

  // train
  auto* train = app.add_subcommand("train", "Train the noise-prediction model on a corpus");
  std::string train_corpus = "corpus.jsonl";
  std::string train_out = "model.ckpt";
  std::string train_loss_csv;
  std::optional<int> train_epochs, train_batch, train_T;
  std::optional<double> train_lr;
  train->add_option("--corpus", train_corpus, "Corpus path from gen-data");
  train->add_option("--out", train_out, "Checkpoint output path");
  train->add_option("--loss-csv", train_loss_csv, "Loss history CSV (default: <out>.loss.csv)");
  train->add_option("--epochs", train_epochs, "Training epochs");
  train->add_option("--batch-size", train_batch, "Minibatch size");
  train->add_option("--lr", train_lr, "Adam learning rate");
  train->add_option("--T", train_T, "Diffusion step count");

  // sample
  auto* smp = app.add_subcommand("sample", "Draw parameter initializations from a checkpoint");
  std::string smp_ckpt = "model.ckpt";
  std::string smp_out = "samples.csv";
  int smp_count = 16;
  smp->add_option("--checkpoint", smp_ckpt, "Checkpoint path");
  smp->add_option("--out", smp_out, "Output CSV (columns gamma1..gamma3,beta1..beta3)");
  smp->add_option("--count", smp_count, "Number of samples");

  // eval
  auto* ev = app.add_subcommand("eval", "Head-to-head: diffusion vs random initialization");
  std::string ev_ckpt = "model.ckpt";
  std::string ev_prefix = "eval";
  std::optional<int> ev_count, ev_nmin, ev_nmax, ev_refine, ev_k;
  bool ev_self_check = false;
  ev->add_option("--checkpoint", ev_ckpt, "Checkpoint path");
  ev->add_option("--out", ev_prefix,
                 "Output prefix (<out>.report.json, <out>.per_instance.csv, "
                 "<out>.convergence.csv)");
  ev->add_option("--count", ev_count, "Number of test graphs");
  ev->add_option("--n-min", ev_nmin, "Smallest node count");
  ev->add_option("--n-max", ev_nmax, "Largest node count");
  ev->add_option("--refine-iters", ev_refine, "Refinement steps after initialization");
  ev->add_option("--k", ev_k, "Candidate initializations per arm");
  ev->add_flag("--self-check", ev_self_check,
               "Diffusion arm reuses the random arm's pick (every ratio must be 1)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact brute-force Max-Cut for a graph JSON file");
  std::string orc_graph;
  orc->add_option("--graph", orc_graph, "Graph file: {\"n\": int, \"edges\": [[i,j],...]}")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Config cfg = default_config();
  if (!config_path.empty()) apply_config_json(json::parse(read_file(config_path)), cfg);

  if (print_config) {
    std::cout << config_to_json(cfg).dump(2) << "\n";
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  if (gen->parsed()) {
    qinit::CorpusManifest m = cfg.gen;
    if (gen_count) m.count = *gen_count;
    if (gen_nmin) m.n_min = *gen_nmin;
    if (gen_nmax) m.n_max = *gen_nmax;
    if (gen_pmin) m.p_min = *gen_pmin;
    if (gen_pmax) m.p_max = *gen_pmax;
    if (gen_nstarts) m.n_starts = *gen_nstarts;
    if (gen_iters) m.optimizer.max_iters = *gen_iters;
    m.master_seed = resolve_seed(seed);
    const auto corpus = qinit::generate_corpus(m, gen_out, [](int done, int total) {
      if (done % 25 == 0 || done == total) {
        std::cout << "mined " << done << "/" << total << " records\n" << std::flush;
      }
    });
    std::cout << "corpus: " << gen_out << " (" << corpus.records.size() << " records)\n"
              << "manifest: " << qinit::manifest_path_for(gen_out) << "\n";
    return kExitOk;
  }

  if (train->parsed()) {
    qinit::TrainConfig tc = cfg.train;
    if (train_epochs) tc.epochs = *train_epochs;
    if (train_batch) tc.batch_size = *train_batch;
    if (train_lr) tc.learning_rate = *train_lr;
    if (train_T) cfg.ddpm_T = *train_T;
    tc.seed = resolve_seed(seed);

    const qinit::Corpus corpus = qinit::load_corpus(train_corpus);
    std::vector<qinit::Vec6> data;
    data.reserve(corpus.records.size());
    for (const auto& r : corpus.records) data.push_back(qinit::normalize_params(r.best_params));

    const qinit::NoiseSchedule schedule = qinit::build_schedule(cfg.ddpm_T);
    const qinit::TrainResult result = qinit::train(data, schedule, tc);
    qinit::save_checkpoint({result.model, schedule}, train_out);

    const std::string loss_path = train_loss_csv.empty() ? train_out + ".loss.csv" : train_loss_csv;
    std::ofstream os(loss_path, std::ios::trunc);
    if (!os) throw qinit::IoError("cannot open " + loss_path);
    os << "epoch,mean_loss\n";
    os.precision(17);
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      os << (e + 1) << ',' << result.epoch_loss[e] << '\n';
    }
    std::cout << "checkpoint: " << train_out << "\nloss history: " << loss_path << "\n";
    return kExitOk;
  }

  if (smp->parsed()) {
    const qinit::Checkpoint ckpt = qinit::load_checkpoint(smp_ckpt);
    const auto samples =
        qinit::sample(ckpt.model, ckpt.schedule, smp_count, resolve_seed(seed));
    std::ofstream os(smp_out, std::ios::trunc);
    if (!os) throw qinit::IoError("cannot open " + smp_out);
    os << "gamma1,gamma2,gamma3,beta1,beta2,beta3\n";
    os.precision(17);
    for (const auto& s : samples) {
      const auto pv = qinit::denormalize_params(s).flat();
      for (int i = 0; i < 6; ++i) os << pv[i] << (i == 5 ? '\n' : ',');
    }
    std::cout << "samples: " << smp_out << "\n";
    return kExitOk;
  }

  if (ev->parsed()) {
    qinit::EvalConfig ec = cfg.eval;
    if (ev_count) ec.count = *ev_count;
    if (ev_nmin) ec.n_min = *ev_nmin;
    if (ev_nmax) ec.n_max = *ev_nmax;
    if (ev_refine) ec.refine_iters = *ev_refine;
    if (ev_k) ec.k_per_arm = *ev_k;
    ec.self_check = ev_self_check;
    ec.seed = resolve_seed(seed);

    const qinit::Checkpoint ckpt = qinit::load_checkpoint(ev_ckpt);
    const qinit::EvalReport report =
        qinit::run_evaluation(ckpt, ec, [](int done, int total) {
          if (done % 5 == 0 || done == total) {
            std::cout << "evaluated " << done << "/" << total << " instances\n" << std::flush;
          }
        });
    qinit::save_report_json(report, ev_prefix + ".report.json");
    qinit::save_per_instance_csv(report, ev_prefix + ".per_instance.csv");
    qinit::save_convergence_csv(report, ev_prefix + ".convergence.csv");
    std::cout << "mean ratio: " << report.mean_ratio << " ("
              << (report.rows.size() - report.undefined_rows) << " defined rows";
    if (report.undefined_rows > 0) std::cout << ", " << report.undefined_rows << " undefined";
    std::cout << ")\nper node size:";
    for (const auto& [n, r] : report.mean_ratio_by_n) std::cout << " " << n << "->" << r;
    std::cout << "\nreport: " << ev_prefix << ".report.json\n";
    return kExitOk;
  }

  if (orc->parsed()) {
    const qinit::Graph g = qinit::graph_from_json(read_file(orc_graph));
    const qinit::CutResult cut = qinit::brute_force_maxcut(g);
    std::cout << "n: " << g.n << "\nedges: " << g.num_edges()
              << "\nmax_cut: " << cut.max_cut_value << "\nwitness: ";
    for (int i = 0; i < g.n; ++i) std::cout << int(cut.witness[i]);
    std::cout << "\nground_energy: " << cut.ground_energy << "\n";
    return kExitOk;
  }

  std::cerr << app.help();
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qinit::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
