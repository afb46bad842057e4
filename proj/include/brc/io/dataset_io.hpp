#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brc/bias/bias_field.hpp"
#include "brc/encoding/coils.hpp"
#include "brc/encoding/encoding.hpp"

namespace brc {

/// Ground truth of one simulated sample. reference = B * x is the fully
/// sampled image metrics are computed against.
struct SampleData {
  std::string id;
  ComplexImage x;
  BiasField bias;
  ComplexImage reference;
  CoilSensitivities coils;
  RealImage brain_mask;
};

/// "R4", "R2.5": directory and file label of an acceleration factor.
std::string r_label(double R);

/// Files: x.brc, B.brc, bx.brc, coils.brc, brain_mask.brc.
void save_sample(const std::filesystem::path& dir, const SampleData& sample);
SampleData load_sample(const std::filesystem::path& dir);

/// Files: mask_<label>.json, mask_<label>.brc (row flags), y_<label>.brc.
void save_kspace(const std::filesystem::path& dir, const KSpaceData& y);
KSpaceData load_kspace(const std::filesystem::path& dir, double R);

/// Sample ids listed in <dataset>/manifest.json.
std::vector<std::string> dataset_sample_ids(const std::filesystem::path& dataset_dir);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace brc
