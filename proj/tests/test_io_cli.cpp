#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "brc/cli/config.hpp"
#include "brc/encoding/mask.hpp"
#include "brc/io/array_container.hpp"
#include "brc/io/dataset_io.hpp"
#include "brc/io/params_io.hpp"
#include "oracles.hpp"

using namespace brc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("brc_io_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(BRC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Relative path -> bytes for every regular file below root.
std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file_bytes(e.path());
  return out;
}

const char* kSimConfig = R"({
  "n_samples": 2, "height": 208, "width": 64,
  "phantom": {"n_tissues": 2, "tissue_levels": [0.5, 0.8]},
  "accelerations": [2, 4]
})";

}  // namespace

TEST_CASE("container: bit-exact round trip of awkward values") {
  NdArray a;
  a.dtype = DType::kF64;
  a.dims = {2, 3};
  a.real = {0.0, -0.0, std::numeric_limits<double>::denorm_min(), 1e308, -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::quiet_NaN()};
  const NdArray b = decode_array(encode_array(a));
  REQUIRE(b.real.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(std::bit_cast<std::uint64_t>(b.real[i]) == std::bit_cast<std::uint64_t>(a.real[i]));

  const fs::path dir = scratch("container");
  const ComplexImage c = oracle::random_complex(5, 7, 1);
  write_complex_image(dir / "c.brc", c);
  CHECK(read_complex_image(dir / "c.brc") == c);
  const std::vector<ComplexImage> stack = {c, oracle::random_complex(5, 7, 2)};
  write_complex_stack(dir / "s.brc", stack);
  CHECK(read_complex_stack(dir / "s.brc") == stack);
  CHECK_THROWS(read_real_image(dir / "c.brc"));
}

TEST_CASE("container: little-endian layout and corrupt input") {
  NdArray a;
  a.dtype = DType::kF64;
  a.dims = {1};
  a.real = {1.0};
  const std::string bytes = encode_array(a);
  CHECK(bytes.substr(0, 4) == "BRC1");
  // 1.0 = 0x3FF0000000000000, least significant byte first.
  const std::string tail = bytes.substr(bytes.size() - 8);
  CHECK(static_cast<unsigned char>(tail[6]) == 0xF0);
  CHECK(static_cast<unsigned char>(tail[7]) == 0x3F);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS(decode_array(bad));
  CHECK_THROWS(decode_array(bytes.substr(0, bytes.size() - 1)));
  CHECK_THROWS(decode_array(bytes + "z"));
}

TEST_CASE("params: save and load") {
  const fs::path dir = scratch("params");
  const PatchVaeParams p = PatchVaeParams::random_init({.patch_size = 6, .hidden = 5, .latent = 3}, 4);
  save_params(dir, p, {{"bias_source", "x"}});
  CHECK(load_params(dir) == p);
  CHECK(read_json(dir / "manifest.json").at("latent_dim") == 3);
}

TEST_CASE("config: unknown keys and missing seeds") {
  using nlohmann::json;
  CHECK_NOTHROW(parse_run_config(json::object()));
  CHECK_THROWS_AS(parse_run_config(json{{"num_iters", 10}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"n4", {{"fwhm", 0.1}, {"bins", 3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_simulate_config(json{{"phantom", {{"tissues", 3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_train_config(json{{"arch", {{"patch_size", 28}, {"depth", 2}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"alpha", -1.0}}), ConfigError);
  CHECK_THROWS(resolve_seed(std::nullopt, std::nullopt, "x"));
  CHECK(resolve_seed(5, std::nullopt, "x") == 5);
  CHECK(resolve_seed(5, 9, "x") == 9);
  const RunConfig rc = parse_run_config(json{{"seed", 3}, {"R", 2.5}, {"num_iter", 602}});
  CHECK(parse_run_config(to_json(rc)).solver.num_iter == 602);
  CHECK(r_label(2.5) == "R2.5");
  CHECK(r_label(4.0) == "R4");
}

TEST_CASE("cli: full pipeline") {
  const fs::path root = scratch("pipeline");
  write_text(root / "sim.json", kSimConfig);
  write_text(root / "train.json", R"({"n_iterations": 30, "batch_size": 8, "arch": {"hidden": 16, "latent": 4}})");
  write_text(root / "run.json", R"({"num_iter": 11, "prior_steps": 2})");
  const std::string sim = "--config " + (root / "sim.json").string() + " --seed 7 simulate --out ";

  SUBCASE("simulate") {
    REQUIRE(run(sim + (root / "d1").string()) == 0);
    REQUIRE(run(sim + (root / "d2").string()) == 0);
    CHECK(tree_bytes(root / "d1") == tree_bytes(root / "d2"));
    CHECK(dataset_sample_ids(root / "d1").size() == 2);
    const KSpaceData y = load_kspace(root / "d1" / "sample_000", 4.0);
    CHECK(y.mask.n_kept() == 52);
    CHECK(y.coil_data.front().height() == 208);
    // No seed anywhere is an error.
    CHECK(run("--config " + (root / "sim.json").string() + " simulate --out " + (root / "d3").string()) != 0);
    write_text(root / "bad.json", R"({"n_samples": 2, "colour": 1})");
    CHECK(run("--config " + (root / "bad.json").string() + " --seed 1 simulate --out " + (root / "d4").string()) != 0);
  }

  SUBCASE("train, reconstruct, evaluate, export") {
    REQUIRE(run(sim + (root / "d").string()) == 0);
    const std::string train = "--config " + (root / "train.json").string() + " --seed 3 train-prior --dataset " +
                              (root / "d").string();
    REQUIRE(run(train + " --bias off --out " + (root / "p_off").string()) == 0);
    REQUIRE(run(train + " --bias off --out " + (root / "p_off2").string()) == 0);
    REQUIRE(run(train + " --bias on --out " + (root / "p_on").string()) == 0);
    CHECK(tree_bytes(root / "p_off") == tree_bytes(root / "p_off2"));
    CHECK(read_json(root / "p_off" / "manifest.json").at("bias_source") == "x");
    CHECK(read_json(root / "p_on" / "manifest.json").at("bias_source") == "bx");
    CHECK(read_json(root / "p_off" / "loss_trace.json").size() == 30);
    CHECK(run(train + " --bias off --out " + (root / "p_x").string() + "_missing --dataset " +
              (root / "nowhere").string()) != 0);

    const std::string recon = "--config " + (root / "run.json").string() + " --seed 1 reconstruct --R 4";
    for (const std::string id : {"sample_000", "sample_001"}) {
      const std::string s = " --sample " + (root / "d" / id).string();
      REQUIRE(run(recon + s + " --mode joint --params " + (root / "p_off").string() + " --out " +
                  (root / "joint" / "R4" / id).string()) == 0);
      REQUIRE(run(recon + s + " --mode baseline --params " + (root / "p_on").string() + " --out " +
                  (root / "base" / "R4" / id).string()) == 0);
    }
    const fs::path jd = root / "joint" / "R4" / "sample_000";
    for (const char* f : {"x.brc", "B.brc", "bx.brc", "bx.png", "B.png", "diagnostics.json"}) CHECK(fs::exists(jd / f));
    const RealImage base_b = read_real_image(root / "base" / "R4" / "sample_000" / "B.brc");
    for (double v : base_b.values()) CHECK(v == 1.0);
    const auto diag = read_json(jd / "diagnostics.json");
    CHECK(diag.at("residual_trace").size() == 11);
    CHECK(diag.at("mode") == "joint");

    // A long schedule is accepted and echoed.
    REQUIRE(run("--seed 1 reconstruct --R 4 --num-iter 302 --mode baseline --sample " +
                (root / "d" / "sample_000").string() + " --out " + (root / "long").string() +
                " --config " + (root / "run0.json").string()) != 0);  // missing config file
    write_text(root / "run0.json", R"({"prior_steps": 0})");
    REQUIRE(run("--config " + (root / "run0.json").string() + " --seed 1 reconstruct --R 4 --num-iter 302 " +
                "--mode baseline --sample " + (root / "d" / "sample_000").string() + " --out " +
                (root / "long").string()) == 0);
    CHECK(read_json(root / "long" / "diagnostics.json").at("num_iter") == 302);
    CHECK(read_json(root / "long" / "diagnostics.json").at("iterations_run") == 302);

    const std::string eval = "--seed 2 evaluate --dataset " + (root / "d").string() + " --R 4 --n-perm 200 ";
    REQUIRE(run(eval + "--method joint=" + (root / "joint").string() + " --method same=" + (root / "joint").string() +
                " --out " + (root / "self").string()) == 0);
    const auto self = read_json(root / "self.json");
    CHECK(self.at("rows").size() == 1);
    CHECK(self.at("rows")[0].at("p_values")[0].at("p") == 1.0);
    CHECK(self.at("rows")[0].at("methods").at("joint") == self.at("rows")[0].at("methods").at("same"));

    fs::create_directories(root / "base" / "R2");
    fs::copy(root / "base" / "R4", root / "base" / "R2", fs::copy_options::recursive);
    fs::create_directories(root / "joint" / "R2");
    fs::copy(root / "joint" / "R4", root / "joint" / "R2", fs::copy_options::recursive);
    REQUIRE(run("--seed 2 evaluate --dataset " + (root / "d").string() + " --R 2,4 --n-perm 200 --method base=" +
                (root / "base").string() + " --method joint=" + (root / "joint").string() + " --out " +
                (root / "rep").string()) == 0);
    CHECK(read_json(root / "rep.json").at("rows").size() == 2);
    const std::string csv = read_file_bytes(root / "rep.csv");
    CHECK(csv.rfind("method,R = 2,R = 4\nbase,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("\njoint,") != std::string::npos);

    fs::remove_all(root / "joint" / "R4" / "sample_001");
    CHECK(run(eval + "--method joint=" + (root / "joint").string() + " --out " + (root / "bad").string()) != 0);

    REQUIRE(run("export-png --kind bias --input " + (jd / "B.brc").string() + " --output " + (root / "b.png").string()) ==
            0);
    CHECK(read_file_bytes(root / "b.png").substr(1, 3) == "PNG");
  }
}

TEST_CASE("cleanup") {
  fs::remove_all(fs::temp_directory_path() / ("brc_io_cli_" + std::to_string(::getpid())));
}
