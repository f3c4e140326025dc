// nprank: keyphrase extraction pipeline driver.
//
//   nprank extract     --dataset D --out candidates.jsonl
//   nprank rank        --dataset D --out predictions.jsonl
//   nprank evaluate    --predictions P --dataset D --out report.json
//   nprank benchmark   --dataset D --out-dir DIR
//   nprank embed-check --sidecar-url URL
//
// Exit codes: 0 ok, 1 internal, 2 config/usage, 3 parse, 4 backend,
// 5 data, 6 I/O.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nprank/pipeline.hpp"

namespace {

using namespace nprank;

// Flags shared by the subcommands that build a PipelineConfig.
struct ConfigFlags {
  std::string config_path;
  std::string backend;
  std::size_t hash_dim = 0;
  std::uint64_t hash_seed = 0;
  std::string sidecar_url;
  std::size_t batch_size = 0;
  int retries = 0;
  bool stem = false;
  std::string cutoffs;
  std::size_t workers = 0;

  CLI::Option* o_backend = nullptr;
  CLI::Option* o_dim = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_url = nullptr;
  CLI::Option* o_batch = nullptr;
  CLI::Option* o_retries = nullptr;
  CLI::Option* o_stem = nullptr;
  CLI::Option* o_cutoffs = nullptr;
  CLI::Option* o_workers = nullptr;

  void attach(CLI::App* app, bool backend_flags, bool eval_flags) {
    app->add_option("--config", config_path, "Key/value config file")->check(CLI::ExistingFile);
    if (backend_flags) {
      o_backend = app->add_option("--backend", backend, "Embedding backend: hash | http");
      o_dim = app->add_option("--hash-dim", hash_dim, "Hash backend dimension");
      o_seed = app->add_option("--hash-seed", hash_seed, "Hash backend seed");
      o_url = app->add_option("--sidecar-url", sidecar_url, "Embedding sidecar base URL");
      o_batch = app->add_option("--batch-size", batch_size, "Texts per /embed request");
      o_retries = app->add_option("--retries", retries, "Attempts per sidecar request");
    }
    o_stem = app->add_flag("--stem,!--no-stem", stem, "Porter-stem phrases before matching");
    if (eval_flags) o_cutoffs = app->add_option("--cutoffs", cutoffs, "Comma-separated cutoffs, e.g. 5,10,15");
    o_workers = app->add_option("--workers", workers, "Document-level worker threads");
  }

  ConfigLayer cli_layer() const {
    ConfigLayer l;
    auto set = [](const CLI::Option* o) { return o && o->count() > 0; };
    if (set(o_backend)) l.backend = parse_backend_kind(backend);
    if (set(o_dim)) l.hash_dim = hash_dim;
    if (set(o_seed)) l.hash_seed = hash_seed;
    if (set(o_url)) l.http_url = sidecar_url;
    if (set(o_batch)) l.http_batch_size = batch_size;
    if (set(o_retries)) l.http_retries = retries;
    if (set(o_stem)) l.stem = stem;
    if (set(o_cutoffs)) l.cutoffs = parse_cutoffs(cutoffs);
    if (set(o_workers)) l.workers = workers;
    return l;
  }

  // benchmark changes the built-in stem default; file, env and flags still win.
  PipelineConfig resolve(std::optional<bool> default_stem = std::nullopt) const {
    const ConfigLayer file = config_path.empty() ? ConfigLayer{} : load_config_file(config_path);
    PipelineConfig c;
    if (default_stem) c.stem = *default_stem;
    file.apply_to(c);
    env_layer().apply_to(c);
    cli_layer().apply_to(c);
    c.validate();
    return c;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Dependency-based noun-phrase keyphrase extraction and ranking"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Write the candidate noun-phrases of every document");
  std::string ex_dataset, ex_out;
  ConfigFlags ex_flags;
  extract->add_option("--dataset", ex_dataset, "Dataset (.jsonl)")->required();
  extract->add_option("--out", ex_out, "Candidate file to write")->required();
  ex_flags.attach(extract, false, false);

  // rank
  auto* rank = app.add_subcommand("rank", "Score and rank candidates, writing a prediction file");
  std::string rk_dataset, rk_out;
  ConfigFlags rk_flags;
  rank->add_option("--dataset", rk_dataset, "Dataset (.jsonl)")->required();
  rank->add_option("--out", rk_out, "Prediction file to write")->required();
  rk_flags.attach(rank, true, false);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a prediction file against gold keyphrases");
  std::string ev_pred, ev_dataset, ev_out, ev_name;
  ConfigFlags ev_flags;
  evaluate_cmd->add_option("--predictions", ev_pred, "Prediction file (.jsonl)")->required();
  evaluate_cmd->add_option("--dataset", ev_dataset, "Dataset (.jsonl)")->required();
  evaluate_cmd->add_option("--out", ev_out, "Report file (JSON) to write");
  evaluate_cmd->add_option("--name", ev_name, "Dataset label (default: dataset file stem)");
  ev_flags.attach(evaluate_cmd, false, true);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "rank + evaluate over one dataset (stemmed matching by default)");
  std::string bm_dataset, bm_dir, bm_name;
  ConfigFlags bm_flags;
  bench->add_option("--dataset", bm_dataset, "Dataset (.jsonl)")->required();
  bench->add_option("--out-dir", bm_dir, "Directory for predictions and report")->required();
  bench->add_option("--name", bm_name, "Dataset label (default: dataset file stem)");
  bm_flags.attach(bench, true, true);

  // embed-check
  auto* check = app.add_subcommand("embed-check", "Probe a running embedding sidecar for contract compliance");
  std::string ck_url;
  std::size_t ck_batch = 32;
  int ck_retries = 3;
  auto* ck_url_opt = check->add_option("--sidecar-url", ck_url, "Sidecar base URL");
  check->add_option("--batch", ck_batch, "Probe batch size")->check(CLI::PositiveNumber);
  check->add_option("--retries", ck_retries, "Attempts per request")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::Config);
  }

  if (*extract) {
    const auto cfg = ex_flags.resolve();
    const auto docs = load_dataset(ex_dataset);
    atomic_write(ex_out, extract_candidates_file(docs, cfg.stem, cfg.workers));
    return 0;
  }

  if (*rank) {
    const auto cfg = rk_flags.resolve();
    const auto docs = load_dataset(rk_dataset);
    const auto backend = make_backend(cfg);
    atomic_write(rk_out, predictions_file(rank_dataset(docs, *backend, cfg.stem, cfg.workers)));
    return 0;
  }

  if (*evaluate_cmd) {
    const auto cfg = ev_flags.resolve();
    const auto docs = load_dataset(ev_dataset);
    const auto preds = load_predictions(ev_pred);
    const auto report =
        evaluate(preds, docs, cfg.cutoffs, cfg.stem, ev_name.empty() ? dataset_name_from_path(ev_dataset) : ev_name);
    if (!ev_out.empty()) atomic_write(ev_out, report_json(report));
    std::cout << format_table(report);
    return 0;
  }

  if (*bench) {
    const auto cfg = bm_flags.resolve(true);
    const std::string name = bm_name.empty() ? dataset_name_from_path(bm_dataset) : bm_name;
    const auto docs = load_dataset(bm_dataset);
    const auto backend = make_backend(cfg);
    const auto ranked = rank_dataset(docs, *backend, cfg.stem, cfg.workers);
    std::filesystem::create_directories(bm_dir);
    const auto pred_path = std::filesystem::path(bm_dir) / (name + ".predictions.jsonl");
    const auto pred_text = predictions_file(ranked);
    atomic_write(pred_path, pred_text);
    std::istringstream pred_in(pred_text);
    const auto report = evaluate(read_predictions(pred_in), docs, cfg.cutoffs, cfg.stem, name);
    atomic_write(std::filesystem::path(bm_dir) / (name + ".report.json"), report_json(report));
    std::cout << format_table(report);
    return 0;
  }

  if (*check) {
    HttpBackendOptions opts;
    opts.url = ck_url_opt->count() ? ck_url : env_layer().http_url.value_or(opts.url);
    opts.attempts = ck_retries;
    bool ok = true;
    for (const auto& r : run_embed_check(opts, ck_batch)) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
      ok = ok && r.passed;
    }
    return ok ? 0 : static_cast<int>(ExitCode::Backend);
  }
  return static_cast<int>(ExitCode::Internal);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nprank::Error& e) {
    std::cerr << "nprank: " << e.what() << "\n";
    return static_cast<int>(nprank::exit_code_for(e));
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "nprank: " << e.what() << "\n";
    return static_cast<int>(nprank::ExitCode::Io);
  } catch (const std::exception& e) {
    std::cerr << "nprank: internal error: " << e.what() << "\n";
    return static_cast<int>(nprank::ExitCode::Internal);
  }
}
