#include "brc/io/dataset_io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "brc/io/array_container.hpp"

namespace brc {

std::string r_label(double R) {
  if (!(R >= 1.0) || !std::isfinite(R)) throw std::invalid_argument("r_label: R must be >= 1");
  std::ostringstream ss;
  if (R == std::round(R)) {
    ss << 'R' << static_cast<long long>(R);
  } else {
    ss << 'R' << R;
  }
  return ss.str();
}

void save_sample(const std::filesystem::path& dir, const SampleData& s) {
  std::filesystem::create_directories(dir);
  write_complex_image(dir / "x.brc", s.x);
  write_real_image(dir / "B.brc", s.bias.field);
  write_complex_image(dir / "bx.brc", s.reference);
  write_complex_stack(dir / "coils.brc", s.coils.maps);
  write_real_image(dir / "brain_mask.brc", s.brain_mask);
}

SampleData load_sample(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("sample directory not found: " + dir.string());
  SampleData s;
  s.id = dir.filename().string();
  s.x = read_complex_image(dir / "x.brc");
  s.brain_mask = read_real_image(dir / "brain_mask.brc");
  s.bias = BiasField{read_real_image(dir / "B.brc"), s.brain_mask};
  s.reference = read_complex_image(dir / "bx.brc");
  s.coils.maps = read_complex_stack(dir / "coils.brc");
  require_same_shape(s.x, s.brain_mask, "load_sample");
  require_same_shape(s.x, s.reference, "load_sample");
  require_same_shape(s.x, s.coils.maps.front(), "load_sample");
  return s;
}

void save_kspace(const std::filesystem::path& dir, const KSpaceData& y) {
  std::filesystem::create_directories(dir);
  const std::string label = r_label(y.mask.R);
  write_json(dir / ("mask_" + label + ".json"), mask_to_json(y.mask));
  std::vector<double> flags;
  for (char f : y.mask.row_flags()) flags.push_back(f ? 1.0 : 0.0);
  write_vector(dir / ("mask_" + label + ".brc"), flags);
  write_complex_stack(dir / ("y_" + label + ".brc"), y.coil_data);
}

KSpaceData load_kspace(const std::filesystem::path& dir, double R) {
  const std::string label = r_label(R);
  KSpaceData y;
  y.mask = mask_from_json(read_json(dir / ("mask_" + label + ".json")));
  y.coil_data = read_complex_stack(dir / ("y_" + label + ".brc"));
  for (const auto& c : y.coil_data) {
    if (c.height() != y.mask.height || c.width() != y.mask.width) {
      throw std::runtime_error("k-space data and mask disagree in " + dir.string());
    }
  }
  return y;
}

std::vector<std::string> dataset_sample_ids(const std::filesystem::path& dataset_dir) {
  const auto manifest = read_json(dataset_dir / "manifest.json");
  std::vector<std::string> ids;
  for (const auto& s : manifest.at("samples")) ids.push_back(s.at("id").get<std::string>());
  return ids;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file_bytes(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file_bytes(path, j.dump(2) + "\n");
}

}  // namespace brc
