#include "brc/io/params_io.hpp"

#include <stdexcept>

#include "brc/io/array_container.hpp"

namespace brc {
namespace {

constexpr const char* kArchName = "mlp2-softplus";

NdArray to_array(const Eigen::MatrixXd& m) {
  NdArray a;
  a.dtype = DType::kF64;
  a.dims = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
  a.real.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.real.push_back(m(r, c));
  return a;
}

Eigen::MatrixXd from_array(const NdArray& a) {
  if (a.dtype != DType::kF64 || a.dims.size() != 2) throw std::runtime_error("params: expected 2D f64 tensor");
  Eigen::MatrixXd m(a.dims[0], a.dims[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = a.real[k++];
  return m;
}

}  // namespace

void save_params(const std::filesystem::path& dir, const PatchVaeParams& params, const nlohmann::json& extra) {
  params.validate();
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = extra;
  manifest["arch"] = kArchName;
  manifest["latent_dim"] = params.arch.latent;
  manifest["patch_size"] = params.arch.patch_size;
  manifest["hidden"] = params.arch.hidden;
  manifest["sigma"] = params.arch.sigma;
  manifest["tensors"] = nlohmann::json::array();
  for (int t = 0; t < PatchVaeParams::kTensorCount; ++t) {
    const std::string name(PatchVaeParams::name(t));
    write_array(dir / (name + ".brc"), to_array(params.tensors[t]));
    manifest["tensors"].push_back(name);
  }
  write_file_bytes(dir / "manifest.json", manifest.dump(2) + "\n");
}

PatchVaeParams load_params(const std::filesystem::path& dir) {
  const auto manifest = nlohmann::json::parse(read_file_bytes(dir / "manifest.json"));
  if (manifest.at("arch").get<std::string>() != kArchName) {
    throw std::runtime_error("params: unsupported architecture " + manifest.at("arch").dump());
  }
  VaeArch arch;
  arch.latent = manifest.at("latent_dim").get<int>();
  arch.patch_size = manifest.at("patch_size").get<int>();
  arch.hidden = manifest.at("hidden").get<int>();
  arch.sigma = manifest.at("sigma").get<double>();
  PatchVaeParams params = PatchVaeParams::zeros(arch);
  for (int t = 0; t < PatchVaeParams::kTensorCount; ++t) {
    params.tensors[t] = from_array(read_array(dir / (std::string(PatchVaeParams::name(t)) + ".brc")));
  }
  params.validate();
  return params;
}

}  // namespace brc
