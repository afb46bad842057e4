// brc: command-line front end for simulation, prior training,
// reconstruction, evaluation and PNG export.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "brc/cli/commands.hpp"
#include "brc/numerics/parallel.hpp"

namespace fs = std::filesystem;

namespace {

std::optional<nlohmann::json> load_config(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return brc::read_json(path);
}

brc::Window parse_window(const std::vector<double>& w, brc::Window fallback) {
  if (w.empty()) return fallback;
  if (w.size() != 2) throw CLI::ValidationError("--window", "expects two values LO HI");
  return brc::Window{w[0], w[1]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint image and bias-field reconstruction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads (default: BRC_THREADS or 1)")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  std::string sim_out;
  sim->add_option("--out", sim_out, "Output dataset directory (overrides output_dir)");

  auto* train = app.add_subcommand("train-prior", "Train a patch VAE prior on a dataset");
  std::string train_dataset, train_out, bias_flag;
  train->add_option("--dataset", train_dataset, "Dataset directory")->required();
  train->add_option("--out", train_out, "Output parameter directory")->required();
  train->add_option("--bias", bias_flag, "Train on biased (on) or bias-free (off) images")
      ->required()
      ->check(CLI::IsMember({"on", "off"}));

  auto* recon = app.add_subcommand("reconstruct", "Reconstruct one sample");
  std::string recon_sample, recon_params, recon_out, recon_mode;
  std::optional<double> recon_R;
  std::optional<int> recon_iters;
  recon->add_option("--sample", recon_sample, "Sample directory");
  recon->add_option("--params", recon_params, "Prior parameter directory");
  recon->add_option("--out", recon_out, "Result directory");
  recon->add_option("--R", recon_R, "Acceleration factor of the acquisition to use");
  recon->add_option("--num-iter", recon_iters, "Number of iterations");
  recon->add_option("--mode", recon_mode, "baseline or joint")->check(CLI::IsMember({"baseline", "joint"}));

  auto* eval = app.add_subcommand("evaluate", "Masked RMSE and permutation tests over result sets");
  std::string eval_dataset, eval_out;
  std::vector<std::string> eval_methods;
  std::vector<double> eval_R;
  int n_perm = 10000;
  eval->add_option("--dataset", eval_dataset, "Reference dataset directory")->required();
  eval->add_option("--method", eval_methods, "NAME=DIR, repeatable; the first is the reference method")->required();
  eval->add_option("--R", eval_R, "Acceleration factors")->required()->delimiter(',');
  eval->add_option("--out", eval_out, "Report path prefix (.json and .csv are appended)")->required();
  eval->add_option("--n-perm", n_perm, "Permutations per test")->check(CLI::PositiveNumber);

  auto* png = app.add_subcommand("export-png", "Windowed 8-bit PNG of an array container");
  std::string png_in, png_out, png_kind = "image";
  std::vector<double> png_window;
  png->add_option("--input", png_in, "Input .brc file")->required()->check(CLI::ExistingFile);
  png->add_option("--output", png_out, "Output .png file")->required();
  png->add_option("--kind", png_kind, "image ([0, 1.2]) or bias ([0.5, 1.8])")
      ->check(CLI::IsMember({"image", "bias"}));
  png->add_option("--window", png_window, "Explicit window LO HI")->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads) brc::set_thread_count(*threads);
    const auto config = load_config(config_path);

    if (*sim) {
      if (!config) throw brc::ConfigError("simulate: --config is required");
      const auto cfg = brc::parse_simulate_config(*config);
      const fs::path out = sim_out.empty() ? cfg.output_dir : fs::path(sim_out);
      if (out.empty()) throw brc::ConfigError("simulate: no output directory (use --out or output_dir)");
      return brc::cmd_simulate(cfg, brc::resolve_seed(cfg.seed, seed, "simulate"), out);
    }
    if (*train) {
      const auto cfg = brc::parse_train_config(config ? *config : nlohmann::json::object());
      return brc::cmd_train_prior(train_dataset, train_out, bias_flag == "on", cfg,
                                  brc::resolve_seed(cfg.seed, seed, "train-prior"));
    }
    if (*recon) {
      auto cfg = brc::parse_run_config(config ? *config : nlohmann::json::object());
      if (!recon_sample.empty()) cfg.sample_dir = recon_sample;
      if (!recon_params.empty()) cfg.params_dir = recon_params;
      if (!recon_out.empty()) cfg.output_dir = recon_out;
      if (recon_R) cfg.R = *recon_R;
      if (recon_iters) cfg.solver.num_iter = *recon_iters;
      if (!recon_mode.empty()) cfg.solver.mode = brc::parse_mode(recon_mode);
      brc::validate(cfg.solver);
      if (cfg.sample_dir.empty() || cfg.output_dir.empty()) {
        throw brc::ConfigError("reconstruct: sample and output directories are required");
      }
      std::optional<fs::path> params;
      if (!cfg.params_dir.empty()) params = cfg.params_dir;
      return brc::cmd_reconstruct(cfg.sample_dir, params, cfg.output_dir, cfg,
                                  brc::resolve_seed(cfg.seed, seed, "reconstruct"));
    }
    if (*eval) {
      brc::EvaluateOptions opts;
      opts.dataset_dir = eval_dataset;
      for (const auto& m : eval_methods) {
        const auto eq = m.find('=');
        if (eq == std::string::npos || eq == 0) throw brc::ConfigError("evaluate: --method expects NAME=DIR");
        opts.methods.push_back({m.substr(0, eq), m.substr(eq + 1)});
      }
      opts.accelerations = eval_R;
      opts.out_prefix = eval_out;
      opts.n_permutations = n_perm;
      opts.seed = seed.value_or(0);
      return brc::cmd_evaluate(opts);
    }
    if (*png) {
      const brc::Window fallback = png_kind == "bias" ? brc::kBiasWindow : brc::kImageWindow;
      return brc::cmd_export_png(png_in, png_out, parse_window(png_window, fallback));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brc::kExitError;
  }
  return brc::kExitError;
}
