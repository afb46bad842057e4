#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "brc/prior/vae.hpp"

namespace brc {

/// Writes one array container per tensor plus manifest.json
/// {latent_dim, patch_size, sigma, hidden, arch, tensors, ...extra}.
void save_params(const std::filesystem::path& dir, const PatchVaeParams& params,
                 const nlohmann::json& extra = nlohmann::json::object());
PatchVaeParams load_params(const std::filesystem::path& dir);

}  // namespace brc
