#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "brc/cli/config.hpp"
#include "brc/io/dataset_io.hpp"
#include "brc/io/png_export.hpp"

namespace brc {

/// Exit codes shared by all verbs.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDiverged = 2;

/// One simulated sample with its acquisitions, one per acceleration.
struct SimulatedSample {
  SampleData truth;
  std::vector<KSpaceData> acquisitions;
  nlohmann::json record;  // seeds and amplitude, as written to the manifest
};

/// Sample `index` of the dataset described by cfg with master seed `seed`.
SimulatedSample simulate_sample(const SimulateConfig& cfg, std::uint64_t seed, int index);
std::string sample_id(int index);

int cmd_simulate(const SimulateConfig& cfg, std::uint64_t seed, const std::filesystem::path& out_dir);

int cmd_train_prior(const std::filesystem::path& dataset_dir, const std::filesystem::path& out_dir, bool bias_on,
                    const TrainPriorConfig& cfg, std::uint64_t seed);

/// Writes x.brc, B.brc, bx.brc, diagnostics.json, bx.png and B.png.
/// Returns kExitDiverged (outputs still written) when the solver diverged.
int cmd_reconstruct(const std::filesystem::path& sample_dir, const std::optional<std::filesystem::path>& params_dir,
                    const std::filesystem::path& out_dir, const RunConfig& cfg, std::uint64_t seed);

struct MethodResults {
  std::string name;
  std::filesystem::path dir;  // <dir>/<R label>/<sample id>/bx.brc
};

struct EvaluateOptions {
  std::filesystem::path dataset_dir;
  std::vector<MethodResults> methods;
  std::vector<double> accelerations;
  std::filesystem::path out_prefix;  // writes <prefix>.json and <prefix>.csv
  int n_permutations = 10000;
  std::uint64_t seed = 0;
};

int cmd_evaluate(const EvaluateOptions& opts);

/// Magnitude of a 2D real or complex container as windowed 8-bit PNG.
int cmd_export_png(const std::filesystem::path& input, const std::filesystem::path& output, Window window);

}  // namespace brc
