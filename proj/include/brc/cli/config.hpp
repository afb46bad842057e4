#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brc/bias/n4.hpp"
#include "brc/prior/train.hpp"
#include "brc/prior/vae.hpp"
#include "brc/sim/bias_synth.hpp"
#include "brc/sim/phantom.hpp"
#include "brc/solver/reconstruct.hpp"

namespace brc {

/// Raised for malformed or incomplete configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads one JSON object, remembering which keys were consumed so that
/// finish() can reject anything unknown.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string where);

  bool has(const std::string& key) const;

  template <class T>
  T get(const std::string& key, const T& fallback) {
    if (!has(key)) return fallback;
    return require<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
    used_.insert(key);
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + ": key '" + key + "' has the wrong type");
    }
  }

  /// Nested object (empty object when absent).
  ObjectReader child(const std::string& key);
  void finish() const;

 private:
  nlohmann::json j_;
  std::string where_;
  std::set<std::string> used_;
};

enum class BiasProtocol { kNone, kDirect, kReciprocal };
std::string to_string(BiasProtocol p);
BiasProtocol parse_bias_protocol(const std::string& text);

struct SimulateConfig {
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;
  int n_samples = 2;
  int height = 128;
  int width = 128;
  PhantomSpec phantom;  // seed and dims are filled per sample
  double amplitude_min = 0.10;
  double amplitude_max = 0.20;
  BiasSynthConfig bias;  // amplitude and seed are filled per sample
  BiasProtocol protocol = BiasProtocol::kDirect;
  std::vector<double> accelerations = {2, 3, 4, 5};
  int n_center = 15;
  int n_coils = 1;
  double noise_sigma = 0.0;
};

struct TrainPriorConfig {
  std::optional<std::uint64_t> seed;
  VaeArch arch;
  TrainConfig train;  // seed filled from `seed`
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  double R = 4.0;
  SolverConfig solver;  // seed filled from `seed`
  N4Config n4;
  std::filesystem::path sample_dir;
  std::filesystem::path params_dir;
  std::filesystem::path output_dir;
};

SimulateConfig parse_simulate_config(const nlohmann::json& j);
TrainPriorConfig parse_train_config(const nlohmann::json& j);
RunConfig parse_run_config(const nlohmann::json& j);

nlohmann::json to_json(const SimulateConfig& c);
nlohmann::json to_json(const TrainPriorConfig& c);
nlohmann::json to_json(const RunConfig& c);

/// The seed to use: override wins, then the config value; neither is an error.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& config_seed,
                           const std::optional<std::uint64_t>& override_seed, const std::string& what);

}  // namespace brc
