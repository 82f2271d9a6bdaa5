#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using std::filesystem::path;

namespace {

const char* kModel = "\"ref:L=4;w=2\"";

path scratch_root() {
  static path root = [] {
    path p = std::filesystem::temp_directory_path() / "lap_cli_tests";
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
  }();
  return root;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_data_line(const std::string& body) {
  std::stringstream ss(body);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#') return line;
  return "";
}

}  // namespace

TEST_CASE("profile command emits the pinned schema and reruns byte-identically") {
  const path out1 = scratch_root() / "profile1";
  const path out2 = scratch_root() / "profile2";
  const std::string base = std::string("profile --model ") + kModel +
                           " --families planted --lambda --seed 3 --out ";
  CHECK(run(base + out1.string()) == 0);
  CHECK(run(base + out2.string()) == 0);

  const std::string csv1 = slurp(out1 / "profile.csv");
  CHECK(first_data_line(csv1) == "model,family,layer,a_lin,a_mlp,delta,lambda");
  CHECK(csv1 == slurp(out2 / "profile.csv"));
  CHECK(slurp(out1 / "emergence.csv") == slurp(out2 / "emergence.csv"));
  CHECK(slurp(out1 / "profile.json") == slurp(out2 / "profile.json"));

  // figure-data columns follow the <family>alin/<family>amlp layout
  const std::string fig = first_data_line(slurp(out1 / "emergence.csv"));
  CHECK(fig == "layer,refplantedalin,refplantedamlp");

  // every artifact embeds the manifest id
  const std::string manifest = slurp(out1 / "manifest.json");
  CHECK(csv1.find("# manifest=") == 0);
  const std::string id = csv1.substr(11, 16);
  CHECK(manifest.find(id) != std::string::npos);
}

TEST_CASE("steer with scale zero produces an all-zero delta_p column") {
  const path out = scratch_root() / "steer0";
  const std::string cmd = std::string("steer --model ") + kModel +
                          " --family planted --target beta --layers all "
                          "--scales 0 --no-kl --out " +
                          out.string();
  CHECK(run(cmd) == 0);
  const std::string csv = slurp(out / "steering.csv");
  CHECK(first_data_line(csv) ==
        "model,family,layer,scale,delta_p,kl_collateral,efficiency,cd_target_rank,"
        "cd_target_value,d_norm,n_target,n_nontarget,baseline_p");
  std::stringstream ss(csv);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("model,", 0) == 0) continue;
    ++rows;
    // delta_p is the fifth field
    std::stringstream ls(line);
    std::string cell;
    for (int i = 0; i < 5; ++i) std::getline(ls, cell, ',');
    CHECK(cell == "0.000000");
  }
  CHECK(rows == 4);
}

TEST_CASE("steer emits generation transcripts and separability") {
  const path out = scratch_root() / "steerdemo";
  const std::string cmd = std::string("steer --model ") + kModel +
                          " --family planted --target beta --layers mid,lap "
                          "--scales 1.0 --generate --separability --max-tokens 2 "
                          "--no-kl --out " +
                          out.string();
  CHECK(run(cmd) == 0);
  const std::string demo = slurp(out / "demo.json");
  CHECK(demo.find("\"before\"") != std::string::npos);
  CHECK(demo.find("\"after\"") != std::string::npos);
  CHECK(demo.find("beta") != std::string::npos);
  const std::string sep = slurp(out / "separability.csv");
  CHECK(first_data_line(sep) == "layer,separability");
}

TEST_CASE("predict and correlate round-trip through summary CSVs") {
  const path out_a = scratch_root() / "predict_a";
  const path out_b = scratch_root() / "predict_b";
  const std::string fams = " --families planted,unplanted ";
  CHECK(run(std::string("predict --model ") + kModel + fams +
            "--no-probes --out " + out_a.string()) == 0);
  CHECK(run(std::string("predict --model \"ref:L=4;w=1\"") + fams +
            "--no-probes --out " + out_b.string()) == 0);

  const std::string summary = slurp(out_a / "predict_summary.csv");
  CHECK(first_data_line(summary) == "family,peakalin,maxdp");
  CHECK(first_data_line(slurp(out_a / "scatter.csv")) == "peakalin,maxdp");
  CHECK(slurp(out_a / "diagnosis.json").find("\"verdict\"") != std::string::npos);
  // correlation notice with only two families
  CHECK(slurp(out_a / "correlation.json").find("skipped") != std::string::npos);

  // cross-model correlate over the two summaries fails on n < 3 with a data error
  const path out_corr = scratch_root() / "corr";
  const int code = run(std::string("correlate --source ") +
                       (out_a / "predict_summary.csv").string() + " --target " +
                       (out_b / "predict_summary.csv").string() + " --out " +
                       out_corr.string());
  CHECK(code == 3);
}

TEST_CASE("steer --lambda exports the sensitivity scatter") {
  const path out = scratch_root() / "steerlambda";
  const std::string cmd = std::string("steer --model ") + kModel +
                          " --family planted --target beta --layers all "
                          "--scales 1.0 --lambda --no-kl --out " +
                          out.string();
  CHECK(run(cmd) == 0);
  const std::string csv = slurp(out / "chaotic.csv");
  CHECK(first_data_line(csv) == "lambda,dp,alin");
  std::stringstream ss(csv);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.rfind("lambda,", 0) != 0) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("predict over three families computes the steerability correlation") {
  // a half-planted custom family: six key-ending prompts the writer plants,
  // six filler-ending prompts it cannot, split across both answers
  const path fam_dir = scratch_root() / "families" / "half_planted";
  std::filesystem::create_directories(fam_dir);
  {
    std::ofstream items(fam_dir / "items.jsonl");
    items << R"({"prompt": "f0 f1 k0", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f1 f2 k1", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f2 f3 k2", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f0 f1 k4", "answer": "beta", "class": "beta"})" << "\n";
    items << R"({"prompt": "f1 f2 k5", "answer": "beta", "class": "beta"})" << "\n";
    items << R"({"prompt": "f2 f3 k6", "answer": "beta", "class": "beta"})" << "\n";
    items << R"({"prompt": "f4 f5 f6", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f5 f6 f7", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f6 f7 f8", "answer": "alpha", "class": "alpha"})" << "\n";
    items << R"({"prompt": "f7 f8 f9", "answer": "beta", "class": "beta"})" << "\n";
    items << R"({"prompt": "f8 f9 f10", "answer": "beta", "class": "beta"})" << "\n";
    items << R"({"prompt": "f9 f10 f11", "answer": "beta", "class": "beta"})" << "\n";
    std::ofstream meta(fam_dir / "family.json");
    meta << R"({"family_id": "half_planted", "kind": "custom",)"
         << R"( "classes": ["alpha", "beta"], "templates": []})" << "\n";
  }
  const path out = scratch_root() / "predict3";
  const std::string cmd = std::string("predict --model ") + kModel +
                          " --families planted,unplanted," + fam_dir.string() +
                          " --no-probes --out " + out.string();
  CHECK(run(cmd) == 0);
  const std::string corr = slurp(out / "correlation.json");
  CHECK(corr.find("\"rho_or_r\"") != std::string::npos);
  CHECK(corr.find("\"n\": 3") != std::string::npos);
  // peaks 0 / 0.5 / 1.0 map monotonically onto the delta_p ranks
  CHECK(corr.find("\"rho_or_r\": 1.0") != std::string::npos);

  // cross-model self-join over the same summary: three families, rho defined
  const path corr_out = scratch_root() / "corr3";
  CHECK(run(std::string("correlate --source ") +
            (out / "predict_summary.csv").string() + " --target " +
            (out / "predict_summary.csv").string() + " --out " +
            corr_out.string()) == 0);
  const std::string cross = slurp(corr_out / "correlation.json");
  CHECK(cross.find("\"analysis\": \"cross_model\"") != std::string::npos);
  CHECK(cross.find("\"n\": 3") != std::string::npos);
}

TEST_CASE("builtin arithmetic steers on the toy model with the digit filter") {
  // multi-digit answers are excluded by validation (single digits survive),
  // and the digit filter then drops contaminated non-target prompts
  const path plain_out = scratch_root() / "arith_plain";
  const path filtered_out = scratch_root() / "arith_filtered";
  const std::string base = std::string("steer --model ") + kModel +
                           " --family arithmetic --target 9 --layers 2 "
                           "--scales 1.0 --no-kl --out ";
  CHECK(run(base + plain_out.string()) == 0);
  CHECK(run(base + filtered_out.string() + " --digit-filter") == 0);

  CHECK(std::filesystem::exists(plain_out / "exclusions_arithmetic.json"));

  auto nontarget_of = [&](const path& dir) {
    const std::string csv = slurp(dir / "steering.csv");
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("model,", 0) == 0) continue;
      std::stringstream ls(line);
      std::string cell;
      for (int i = 0; i < 12; ++i) std::getline(ls, cell, ',');
      return std::stoi(cell);
    }
    return -1;
  };
  const int plain_nontarget = nontarget_of(plain_out);
  const int filtered_nontarget = nontarget_of(filtered_out);
  CHECK(plain_nontarget > 0);
  CHECK(filtered_nontarget > 0);
  CHECK(filtered_nontarget < plain_nontarget);
}

TEST_CASE("predict with probes classifies the planted regime") {
  const path out = scratch_root() / "predictprobes";
  const std::string cmd = std::string("predict --model ") + kModel +
                          " --families planted --out " + out.string();
  CHECK(run(cmd) == 0);  // probes are on by default for predict
  const std::string diag = slurp(out / "diagnosis.json");
  CHECK(diag.find("\"regime\": 3") != std::string::npos);
  CHECK(diag.find("\"verdict\": \"go\"") != std::string::npos);
}

TEST_CASE("failures command writes the cluster report") {
  const path out = scratch_root() / "failures";
  const std::string cmd = std::string("failures --model ") + kModel +
                          " --family planted --target beta --layer 0 --out " +
                          out.string();
  CHECK(run(cmd) == 0);
  const std::string report = slurp(out / "failures.json");
  CHECK(report.find("\"taxonomy\"") != std::string::npos);
  CHECK(report.find("\"silhouette_by_k\"") != std::string::npos);
  CHECK(report.find("wrong_direction") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage, data, and backend errors") {
  CHECK(run("profile") == 2);                          // missing required flags
  CHECK(run("bogus-subcommand") == 2);                 // unknown subcommand
  const path out = scratch_root() / "err";
  CHECK(run(std::string("profile --model ") + kModel +
            " --families no-such-family --out " + out.string()) == 3);
  CHECK(run("profile --model unknown-model --families core --out " +
            out.string()) == 4);
  CHECK(run(std::string("steer --model ") + kModel +
            " --family planted --target zzz --layers all --out " +
            out.string()) == 3);  // target absent from the family
}

TEST_CASE("capture cache is reused across runs") {
  const path cache = scratch_root() / "cache";
  const path out1 = scratch_root() / "cached1";
  const path out2 = scratch_root() / "cached2";
  const std::string base = std::string("profile --model ") + kModel +
                           " --families planted --cache " + cache.string() +
                           " --seed 5 --out ";
  CHECK(run(base + out1.string()) == 0);
  REQUIRE(std::filesystem::is_directory(cache));
  bool has_manifest = false;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(cache))
    if (entry.path().filename() == "manifest.json") has_manifest = true;
  CHECK(has_manifest);
  CHECK(run(base + out2.string()) == 0);
  CHECK(slurp(out1 / "profile.csv") == slurp(out2 / "profile.csv"));
}
