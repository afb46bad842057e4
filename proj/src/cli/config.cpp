#include "brc/cli/config.hpp"

namespace brc {

using nlohmann::json;

ObjectReader::ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
}

bool ObjectReader::has(const std::string& key) const { return j_.contains(key); }

ObjectReader ObjectReader::child(const std::string& key) {
  if (!has(key)) return ObjectReader(json::object(), where_ + "." + key);
  used_.insert(key);
  return ObjectReader(j_.at(key), where_ + "." + key);
}

void ObjectReader::finish() const {
  for (const auto& item : j_.items()) {
    if (!used_.contains(item.key())) throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
  }
}

std::string to_string(BiasProtocol p) {
  switch (p) {
    case BiasProtocol::kNone: return "none";
    case BiasProtocol::kDirect: return "direct";
    case BiasProtocol::kReciprocal: return "reciprocal";
  }
  return "direct";
}

BiasProtocol parse_bias_protocol(const std::string& text) {
  if (text == "none") return BiasProtocol::kNone;
  if (text == "direct") return BiasProtocol::kDirect;
  if (text == "reciprocal") return BiasProtocol::kReciprocal;
  throw ConfigError("unknown bias protocol '" + text + "' (expected none, direct or reciprocal)");
}

namespace {

std::optional<std::uint64_t> read_seed(ObjectReader& r) {
  if (!r.has("seed")) return std::nullopt;
  return r.require<std::uint64_t>("seed");
}

template <class Fn>
auto wrap_validation(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

N4Config read_n4(ObjectReader r) {
  N4Config n4;
  n4.n_bins = r.get("n_bins", n4.n_bins);
  n4.fwhm = r.get("fwhm", n4.fwhm);
  n4.wiener_noise = r.get("wiener_noise", n4.wiener_noise);
  n4.control_spacing = r.get("control_spacing", n4.control_spacing);
  n4.convergence_threshold = r.get("convergence_threshold", n4.convergence_threshold);
  n4.max_iterations = r.get("max_iterations", n4.max_iterations);
  n4.n_fitting_levels = r.get("n_fitting_levels", n4.n_fitting_levels);
  r.finish();
  return n4;
}

json n4_json(const N4Config& n4) {
  return {{"n_bins", n4.n_bins},
          {"fwhm", n4.fwhm},
          {"wiener_noise", n4.wiener_noise},
          {"control_spacing", n4.control_spacing},
          {"convergence_threshold", n4.convergence_threshold},
          {"max_iterations", n4.max_iterations},
          {"n_fitting_levels", n4.n_fitting_levels}};
}

json seed_json(const std::optional<std::uint64_t>& seed) { return seed ? json(*seed) : json(nullptr); }

}  // namespace

SimulateConfig parse_simulate_config(const json& j) {
  return wrap_validation("simulate config", [&] {
    ObjectReader r(j, "simulate config");
    SimulateConfig c;
    c.output_dir = r.get<std::string>("output_dir", "");
    c.seed = read_seed(r);
    c.n_samples = r.get("n_samples", c.n_samples);
    c.height = r.get("height", c.height);
    c.width = r.get("width", c.width);
    {
      ObjectReader p = r.child("phantom");
      c.phantom.n_tissues = p.get("n_tissues", c.phantom.n_tissues);
      c.phantom.tissue_levels = p.get("tissue_levels", c.phantom.tissue_levels);
      c.phantom.texture_amplitude = p.get("texture_amplitude", c.phantom.texture_amplitude);
      c.phantom.complex_phase = p.get("complex_phase", c.phantom.complex_phase);
      c.phantom.edge_blur = p.get("edge_blur", c.phantom.edge_blur);
      p.finish();
    }
    {
      ObjectReader b = r.child("bias");
      c.amplitude_min = b.get("amplitude_min", c.amplitude_min);
      c.amplitude_max = b.get("amplitude_max", c.amplitude_max);
      c.bias.length_scale = b.get("length_scale", c.bias.length_scale);
      c.bias.control_spacing = b.get("control_spacing", c.bias.control_spacing);
      c.bias.center_weight = b.get("center_weight", c.bias.center_weight);
      c.protocol = parse_bias_protocol(b.get<std::string>("protocol", to_string(c.protocol)));
      b.finish();
    }
    c.accelerations = r.get("accelerations", c.accelerations);
    c.n_center = r.get("n_center", c.n_center);
    c.n_coils = r.get("n_coils", c.n_coils);
    c.noise_sigma = r.get("noise_sigma", c.noise_sigma);
    r.finish();

    if (c.n_samples < 1) throw ConfigError("simulate config: n_samples must be >= 1");
    if (c.n_coils < 1) throw ConfigError("simulate config: n_coils must be >= 1");
    if (!(c.noise_sigma >= 0.0)) throw ConfigError("simulate config: noise_sigma must be >= 0");
    if (c.accelerations.empty()) throw ConfigError("simulate config: accelerations must not be empty");
    for (double R : c.accelerations) {
      if (!(R >= 1.0)) throw ConfigError("simulate config: every acceleration must be >= 1");
    }
    if (!(c.amplitude_min > 0.0) || !(c.amplitude_max >= c.amplitude_min) || !(c.amplitude_max < 0.5)) {
      throw ConfigError("simulate config: need 0 < amplitude_min <= amplitude_max < 0.5");
    }
    c.phantom.height = c.height;
    c.phantom.width = c.width;
    validate(c.phantom);
    BiasSynthConfig probe = c.bias;
    probe.amplitude = c.amplitude_max;
    validate(probe);
    return c;
  });
}

TrainPriorConfig parse_train_config(const json& j) {
  return wrap_validation("train config", [&] {
    ObjectReader r(j, "train config");
    TrainPriorConfig c;
    c.seed = read_seed(r);
    c.train.batch_size = r.get("batch_size", c.train.batch_size);
    c.train.n_iterations = r.get("n_iterations", c.train.n_iterations);
    c.train.learning_rate = r.get("learning_rate", c.train.learning_rate);
    c.train.beta1 = r.get("beta1", c.train.beta1);
    c.train.beta2 = r.get("beta2", c.train.beta2);
    c.train.epsilon = r.get("epsilon", c.train.epsilon);
    {
      ObjectReader a = r.child("arch");
      c.arch.patch_size = a.get("patch_size", c.arch.patch_size);
      c.arch.hidden = a.get("hidden", c.arch.hidden);
      c.arch.latent = a.get("latent", c.arch.latent);
      c.arch.sigma = a.get("sigma", c.arch.sigma);
      a.finish();
    }
    r.finish();
    if (c.train.batch_size < 1 || c.train.n_iterations < 1 || !(c.train.learning_rate > 0.0)) {
      throw ConfigError("train config: batch_size, n_iterations and learning_rate must be positive");
    }
    if (c.arch.patch_size < 2 || c.arch.hidden < 1 || c.arch.latent < 1 || !(c.arch.sigma > 0.0)) {
      throw ConfigError("train config: invalid arch");
    }
    return c;
  });
}

RunConfig parse_run_config(const json& j) {
  return wrap_validation("run config", [&] {
    ObjectReader r(j, "run config");
    RunConfig c;
    c.seed = read_seed(r);
    c.R = r.get("R", c.R);
    auto& s = c.solver;
    s.mode = parse_mode(r.get<std::string>("mode", to_string(s.mode)));
    s.num_iter = r.get("num_iter", s.num_iter);
    s.bias_estim_freq = r.get("bias_estim_freq", s.bias_estim_freq);
    s.dc_proj_freq = r.get("dc_proj_freq", s.dc_proj_freq);
    s.alpha = r.get("alpha", s.alpha);
    s.prior_steps = r.get("prior_steps", s.prior_steps);
    s.patch_stride = r.get("patch_stride", s.patch_stride);
    s.phase_projection = r.get("phase_projection", s.phase_projection);
    s.phase_sigma = r.get("phase_sigma", s.phase_sigma);
    s.dc_warmup_iters = r.get("dc_warmup_iters", s.dc_warmup_iters);
    s.freeze_bias = r.get("freeze_bias", s.freeze_bias);
    c.n4 = read_n4(r.child("n4"));
    {
      ObjectReader p = r.child("paths");
      c.sample_dir = p.get<std::string>("sample", "");
      c.params_dir = p.get<std::string>("params", "");
      c.output_dir = p.get<std::string>("output", "");
      p.finish();
    }
    r.finish();
    if (!(c.R >= 1.0)) throw ConfigError("run config: R must be >= 1");
    validate(c.solver);
    validate(c.n4);
    return c;
  });
}

json to_json(const SimulateConfig& c) {
  json accel = c.accelerations;
  return {{"output_dir", c.output_dir.string()},
          {"seed", seed_json(c.seed)},
          {"n_samples", c.n_samples},
          {"height", c.height},
          {"width", c.width},
          {"phantom",
           {{"n_tissues", c.phantom.n_tissues},
            {"tissue_levels", c.phantom.tissue_levels},
            {"texture_amplitude", c.phantom.texture_amplitude},
            {"complex_phase", c.phantom.complex_phase},
            {"edge_blur", c.phantom.edge_blur}}},
          {"bias",
           {{"amplitude_min", c.amplitude_min},
            {"amplitude_max", c.amplitude_max},
            {"length_scale", c.bias.length_scale},
            {"control_spacing", c.bias.control_spacing},
            {"center_weight", c.bias.center_weight},
            {"protocol", to_string(c.protocol)}}},
          {"accelerations", accel},
          {"n_center", c.n_center},
          {"n_coils", c.n_coils},
          {"noise_sigma", c.noise_sigma}};
}

json to_json(const TrainPriorConfig& c) {
  return {{"seed", seed_json(c.seed)},
          {"batch_size", c.train.batch_size},
          {"n_iterations", c.train.n_iterations},
          {"learning_rate", c.train.learning_rate},
          {"beta1", c.train.beta1},
          {"beta2", c.train.beta2},
          {"epsilon", c.train.epsilon},
          {"arch",
           {{"patch_size", c.arch.patch_size},
            {"hidden", c.arch.hidden},
            {"latent", c.arch.latent},
            {"sigma", c.arch.sigma}}}};
}

json to_json(const RunConfig& c) {
  const auto& s = c.solver;
  return {{"seed", seed_json(c.seed)},
          {"R", c.R},
          {"mode", to_string(s.mode)},
          {"num_iter", s.num_iter},
          {"bias_estim_freq", s.bias_estim_freq},
          {"dc_proj_freq", s.dc_proj_freq},
          {"alpha", s.alpha},
          {"prior_steps", s.prior_steps},
          {"patch_stride", s.patch_stride},
          {"phase_projection", s.phase_projection},
          {"phase_sigma", s.phase_sigma},
          {"dc_warmup_iters", s.dc_warmup_iters},
          {"freeze_bias", s.freeze_bias},
          {"n4", n4_json(c.n4)},
          {"paths",
           {{"sample", c.sample_dir.string()}, {"params", c.params_dir.string()}, {"output", c.output_dir.string()}}}};
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& config_seed,
                           const std::optional<std::uint64_t>& override_seed, const std::string& what) {
  if (override_seed) return *override_seed;
  if (config_seed) return *config_seed;
  throw ConfigError(what + ": no seed given (set \"seed\" in the config or pass --seed)");
}

}  // namespace brc
