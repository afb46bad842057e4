#include "brc/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "brc/encoding/mask.hpp"
#include "brc/eval/metrics.hpp"
#include "brc/io/array_container.hpp"
#include "brc/io/params_io.hpp"
#include "brc/numerics/parallel.hpp"
#include "brc/numerics/rng.hpp"
#include "brc/sim/acquisition.hpp"

namespace brc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum SeedStream : std::uint64_t { kPhantom = 1, kBias = 2, kAmplitude = 3, kMask = 4, kNoise = 5 };

}  // namespace

std::string sample_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%03d", index);
  return buf;
}

SimulatedSample simulate_sample(const SimulateConfig& cfg, std::uint64_t seed, int index) {
  const auto i = static_cast<std::uint64_t>(index);
  SimulatedSample out;
  PhantomSpec spec = cfg.phantom;
  spec.height = cfg.height;
  spec.width = cfg.width;
  spec.seed = derive_seed(seed, kPhantom, i);
  const Phantom phantom = make_phantom(spec);

  Rng amp_rng(derive_seed(seed, kAmplitude, i));
  BiasSynthConfig bias_cfg = cfg.bias;
  bias_cfg.amplitude = amp_rng.uniform(cfg.amplitude_min, cfg.amplitude_max);
  bias_cfg.seed = derive_seed(seed, kBias, i);

  BiasField bias = unit_field(phantom.brain_mask);
  if (cfg.protocol != BiasProtocol::kNone) {
    bias = synth_bias(bias_cfg, phantom.brain_mask);
    if (cfg.protocol == BiasProtocol::kReciprocal) bias = reciprocal_field(bias);
  }

  auto& t = out.truth;
  t.id = sample_id(index);
  t.x = phantom.image;
  t.bias = bias;
  t.reference = multiply(phantom.image, bias.field);
  t.coils = simulate_coils(cfg.height, cfg.width, cfg.n_coils);
  t.brain_mask = phantom.brain_mask;

  json masks = json::object();
  for (std::size_t k = 0; k < cfg.accelerations.size(); ++k) {
    const double R = cfg.accelerations[k];
    const std::uint64_t mask_seed = derive_seed(seed, kMask, i, k);
    const std::uint64_t noise_seed = derive_seed(seed, kNoise, i, k);
    const SamplingMask mask = make_mask(cfg.height, cfg.width, R, cfg.n_center, mask_seed);
    out.acquisitions.push_back(
        simulate_acquisition(t.x, t.bias.field, t.coils, mask, NoiseConfig{cfg.noise_sigma, noise_seed}));
    masks[r_label(R)] = {{"mask_seed", mask_seed}, {"noise_seed", noise_seed}, {"n_kept", mask.n_kept()}};
  }
  out.record = {{"id", t.id},
                {"phantom_seed", spec.seed},
                {"bias_seed", bias_cfg.seed},
                {"bias_amplitude", bias_cfg.amplitude},
                {"acquisitions", masks}};
  return out;
}

int cmd_simulate(const SimulateConfig& cfg, std::uint64_t seed, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  json samples = json::array();
  for (int i = 0; i < cfg.n_samples; ++i) {
    const SimulatedSample s = simulate_sample(cfg, seed, i);
    const fs::path dir = out_dir / s.truth.id;
    save_sample(dir, s.truth);
    for (const auto& y : s.acquisitions) save_kspace(dir, y);
    samples.push_back(s.record);
  }
  json config = to_json(cfg);
  config.erase("output_dir");
  config["seed"] = seed;
  write_json(out_dir / "manifest.json", {{"format", "brc-dataset-1"},
                                         {"seed", seed},
                                         {"height", cfg.height},
                                         {"width", cfg.width},
                                         {"accelerations", cfg.accelerations},
                                         {"config", config},
                                         {"samples", samples}});
  return kExitOk;
}

int cmd_train_prior(const fs::path& dataset_dir, const fs::path& out_dir, bool bias_on, const TrainPriorConfig& cfg,
                    std::uint64_t seed) {
  if (!fs::exists(dataset_dir / "manifest.json")) {
    throw std::runtime_error("dataset not found: " + dataset_dir.string());
  }
  PatchDataset data;
  data.patch_size = cfg.arch.patch_size;
  for (const auto& id : dataset_sample_ids(dataset_dir)) {
    const SampleData s = load_sample(dataset_dir / id);
    data.images.push_back(magnitude(bias_on ? s.reference : s.x));
  }
  TrainConfig train = cfg.train;
  train.seed = seed;
  const TrainResult result = train_vae(data, cfg.arch, train);

  json echo = to_json(cfg);
  echo["seed"] = seed;
  save_params(out_dir, result.params,
              {{"bias_source", bias_on ? "bx" : "x"},
               {"bias", bias_on ? "on" : "off"},
               {"dataset", dataset_dir.string()},
               {"n_images", data.images.size()},
               {"train_config", echo}});
  write_json(out_dir / "loss_trace.json", result.loss_trace);
  return kExitOk;
}

int cmd_reconstruct(const fs::path& sample_dir, const std::optional<fs::path>& params_dir, const fs::path& out_dir,
                    const RunConfig& cfg, std::uint64_t seed) {
  const SampleData sample = load_sample(sample_dir);
  ReconInputs in;
  in.y = load_kspace(sample_dir, cfg.R);
  in.coils = sample.coils;
  in.support_mask = sample.brain_mask;
  std::optional<PatchVaeParams> params;
  if (params_dir) {
    params = load_params(*params_dir);
    in.prior = &*params;
  }
  SolverConfig solver = cfg.solver;
  solver.seed = seed;
  const ReconResult result = reconstruct(in, solver, cfg.n4);

  fs::create_directories(out_dir);
  write_complex_image(out_dir / "x.brc", result.x);
  write_real_image(out_dir / "B.brc", result.bias.field);
  write_complex_image(out_dir / "bx.brc", result.bx);
  write_png(out_dir / "bx.png", magnitude(result.bx), kImageWindow);
  write_png(out_dir / "B.png", result.bias.field, kBiasWindow);

  const auto& d = result.diagnostics;
  json echo = to_json(cfg);
  echo["seed"] = seed;
  json dc = json::array();
  for (const auto& s : d.dc_steps) dc.push_back({{"iteration", s.iteration}, {"before", s.before}, {"after", s.after}});
  write_json(out_dir / "diagnostics.json", {{"sample", sample.id},
                                            {"mode", to_string(solver.mode)},
                                            {"R", cfg.R},
                                            {"num_iter", solver.num_iter},
                                            {"seed", seed},
                                            {"params", params_dir ? params_dir->string() : ""},
                                            {"config", echo},
                                            {"iterations_run", d.iterations_run},
                                            {"diverged", d.diverged},
                                            {"residual_trace", d.residual_trace},
                                            {"elbo_trace", d.elbo_trace},
                                            {"dc_steps", dc},
                                            {"bias_updates", d.bias_updates}});
  if (d.diverged) {
    std::cerr << "reconstruct: diverged at iteration " << d.iterations_run << "; partial outputs written\n";
    return kExitDiverged;
  }
  return kExitOk;
}

namespace {

std::set<std::string> subdirectories(const fs::path& dir) {
  std::set<std::string> names;
  if (!fs::is_directory(dir)) return names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) names.insert(e.path().filename().string());
  }
  return names;
}

std::string format_cell(const MethodSummary& s, bool star) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%.2f)%s", s.mean, s.stddev, star ? "*" : "");
  return buf;
}

}  // namespace

int cmd_evaluate(const EvaluateOptions& opts) {
  if (opts.methods.empty()) throw std::invalid_argument("evaluate: at least one method is required");
  if (opts.accelerations.empty()) throw std::invalid_argument("evaluate: at least one R is required");
  std::set<std::string> names;
  for (const auto& m : opts.methods) {
    if (!names.insert(m.name).second) throw std::invalid_argument("evaluate: duplicate method name " + m.name);
  }
  const std::vector<std::string> ids = dataset_sample_ids(opts.dataset_dir);
  const std::set<std::string> id_set(ids.begin(), ids.end());

  std::vector<SampleData> truth(ids.size());
  parallel_for(ids.size(), [&](std::size_t i) { truth[i] = load_sample(opts.dataset_dir / ids[i]); });

  json rows = json::array();
  // summaries[r][m]
  std::vector<std::vector<MethodSummary>> summaries;
  std::vector<double> first_vs_other_p;  // per (r, m), m >= 1
  for (double R : opts.accelerations) {
    const std::string label = r_label(R);
    json row = {{"R", R}, {"label", label}, {"methods", json::object()}, {"p_values", json::array()}};
    std::vector<MethodSummary> per_method;
    for (const auto& m : opts.methods) {
      const fs::path rdir = m.dir / label;
      if (subdirectories(rdir) != id_set) {
        throw std::runtime_error("evaluate: sample ids under " + rdir.string() + " do not match the dataset");
      }
      std::vector<double> rmse(ids.size());
      parallel_for(ids.size(), [&](std::size_t i) {
        const ComplexImage bx = read_complex_image(rdir / ids[i] / "bx.brc");
        rmse[i] = rmse_percent(bx, truth[i].reference, truth[i].brain_mask);
      });
      per_method.push_back(summarize(m.name, rmse));
      const auto& s = per_method.back();
      row["methods"][m.name] = {{"rmse", s.rmse}, {"mean", s.mean}, {"std", s.stddev}};
    }
    for (std::size_t a = 0; a < per_method.size(); ++a) {
      for (std::size_t b = a + 1; b < per_method.size(); ++b) {
        double p = 1.0;
        if (ids.size() >= 2) p = permutation_test(per_method[a].rmse, per_method[b].rmse, opts.n_permutations, opts.seed);
        row["p_values"].push_back({{"a", per_method[a].method}, {"b", per_method[b].method}, {"p", p}});
        if (a == 0) first_vs_other_p.push_back(p);
      }
    }
    summaries.push_back(std::move(per_method));
    rows.push_back(row);
  }

  json methods = json::array();
  for (const auto& m : opts.methods) methods.push_back({{"name", m.name}, {"dir", m.dir.string()}});
  const fs::path json_path = fs::path(opts.out_prefix.string() + ".json");
  const fs::path csv_path = fs::path(opts.out_prefix.string() + ".csv");
  if (json_path.has_parent_path()) fs::create_directories(json_path.parent_path());
  write_json(json_path, {{"dataset", opts.dataset_dir.string()},
                         {"sample_ids", ids},
                         {"methods", methods},
                         {"accelerations", opts.accelerations},
                         {"n_permutations", opts.n_permutations},
                         {"seed", opts.seed},
                         {"reference_method", opts.methods.front().name},
                         {"rows", rows}});

  // Methods as rows, R as columns; * marks p < 0.05 against the first method.
  std::ostringstream csv;
  csv << "method";
  for (double R : opts.accelerations) csv << ",R = " << r_label(R).substr(1);
  csv << "\n";
  const std::size_t n_methods = opts.methods.size();
  for (std::size_t m = 0; m < n_methods; ++m) {
    csv << opts.methods[m].name;
    for (std::size_t r = 0; r < opts.accelerations.size(); ++r) {
      const bool star = m > 0 && first_vs_other_p[r * (n_methods - 1) + (m - 1)] < 0.05;
      csv << "," << format_cell(summaries[r][m], star);
    }
    csv << "\n";
  }
  write_file_bytes(csv_path, csv.str());
  return kExitOk;
}

int cmd_export_png(const fs::path& input, const fs::path& output, Window window) {
  const NdArray a = read_array(input);
  if (a.dims.size() != 2) throw std::runtime_error("export-png: expected a 2D array in " + input.string());
  RealImage img(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[1]));
  if (a.dtype == DType::kF64) {
    img.values() = a.real;
  } else {
    for (std::size_t i = 0; i < a.complex.size(); ++i) img.values()[i] = std::abs(a.complex[i]);
  }
  write_png(output, img, window);
  return kExitOk;
}

}  // namespace brc
