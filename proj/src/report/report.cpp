#include "lap/report.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "lap/error.hpp"
#include "lap/hash.hpp"

namespace lap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string opt6(const std::optional<double>& v) {
  return v ? fmt6(*v) : std::string();
}

void emit(RunManifest& manifest, const std::string& path, const std::string& body) {
  fs::create_directories(fs::path(path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(path).parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << body;
  out.close();
  manifest.artifact_checksums[fs::path(path).filename().string()] =
      hex64(fnv1a64(body));
}

std::string csv_banner(const RunManifest& m) {
  return "# manifest=" + m.manifest_id + " tool=" + m.tool_version + "\n";
}

// family ids flattened the way the figure data names its columns
std::string column_key(const std::string& family_id) {
  std::string key;
  for (char c : family_id)
    if (std::isalnum(static_cast<unsigned char>(c)))
      key += char(std::tolower(static_cast<unsigned char>(c)));
  return key;
}

json manifest_header(const RunManifest& m) {
  return json{{"manifest_id", m.manifest_id}, {"tool_version", m.tool_version}};
}

}  // namespace

RunManifest make_manifest(const std::string& command, const std::string& model_id,
                          const std::vector<std::string>& family_ids,
                          std::uint64_t seed, const std::string& config_snapshot) {
  RunManifest m;
  m.command = command;
  m.model_id = model_id;
  m.family_ids = family_ids;
  m.seed = seed;
  m.config_snapshot = config_snapshot;
  std::uint64_t h = fnv1a64(command);
  h = fnv1a64(model_id, h);
  for (const auto& f : family_ids) h = fnv1a64(f, h);
  h = fnv1a64(&seed, sizeof(seed), h);
  h = fnv1a64(config_snapshot, h);
  h = fnv1a64(std::string(kToolVersion), h);
  m.manifest_id = hex64(h);
  m.started = now_utc();
  return m;
}

std::string write_manifest(RunManifest& manifest, const std::string& out_dir) {
  manifest.finished = now_utc();
  json j;
  j["manifest_id"] = manifest.manifest_id;
  j["tool_version"] = manifest.tool_version;
  j["command"] = manifest.command;
  j["model_id"] = manifest.model_id;
  j["families"] = manifest.family_ids;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config_snapshot;
  j["artifacts"] = manifest.artifact_checksums;
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "manifest.json").string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw data_error("cannot write " + path);
  out << j.dump(2) << "\n";
  return path;
}

void write_profile_csv(RunManifest& manifest, const std::string& path,
                       const std::vector<LapProfile>& profiles) {
  std::string body = csv_banner(manifest);
  body += "model,family,layer,a_lin,a_mlp,delta,lambda\n";
  for (const auto& p : profiles) {
    for (const auto& m : p.layers) {
      body += p.model_id + "," + p.family_id + "," + std::to_string(m.layer) + "," +
              fmt6(m.a_lin) + "," + opt6(m.a_mlp) + "," + opt6(m.delta) + "," +
              opt6(m.lambda) + "\n";
    }
  }
  emit(manifest, path, body);
}

void write_figure_profile_csv(RunManifest& manifest, const std::string& path,
                              const std::vector<LapProfile>& profiles) {
  if (profiles.empty()) throw data_error("figure csv: no profiles");
  const std::size_t depth = profiles[0].layers.size();
  for (const auto& p : profiles)
    if (p.layers.size() != depth)
      throw data_error("figure csv: profiles span different layer counts");

  std::string body = csv_banner(manifest);
  body += "layer";
  for (const auto& p : profiles) {
    const std::string key = column_key(p.family_id);
    body += "," + key + "alin," + key + "amlp";
  }
  body += "\n";
  for (std::size_t l = 0; l < depth; ++l) {
    body += std::to_string(profiles[0].layers[l].layer);
    for (const auto& p : profiles) {
      body += "," + fmt6(p.layers[l].a_lin) + "," + opt6(p.layers[l].a_mlp);
    }
    body += "\n";
  }
  emit(manifest, path, body);
}

void write_profile_json(RunManifest& manifest, const std::string& path,
                        const std::vector<LapProfile>& profiles) {
  json arr = json::array();
  for (const auto& p : profiles) {
    json layers = json::array();
    for (const auto& m : p.layers) {
      json lm = {{"layer", m.layer}, {"a_lin", m.a_lin}};
      if (m.a_mlp) lm["a_mlp"] = *m.a_mlp;
      if (m.delta) lm["delta"] = *m.delta;
      if (m.lambda) lm["lambda"] = *m.lambda;
      if (m.a_mlp_train) lm["a_mlp_train"] = *m.a_mlp_train;
      if (m.a_mlp_heldout) lm["a_mlp_heldout"] = *m.a_mlp_heldout;
      if (m.acc_a) lm["acc_a"] = *m.acc_a;
      if (m.acc_b) lm["acc_b"] = *m.acc_b;
      layers.push_back(std::move(lm));
    }
    json pj = {{"model", p.model_id},
               {"family", p.family_id},
               {"layers", std::move(layers)},
               {"peak_a_lin", p.peak_a_lin},
               {"peak_layer", p.peak_layer},
               {"regime", regime_number(p.regime)},
               {"final_layer", p.final_layer}};
    if (p.peak_a_mlp) {
      pj["peak_a_mlp"] = *p.peak_a_mlp;
      json c;
      if (p.crystallization.mlp_layer) c["mlp_layer"] = *p.crystallization.mlp_layer;
      if (p.crystallization.lin_layer) c["lin_layer"] = *p.crystallization.lin_layer;
      if (p.crystallization.gap_layers) c["gap_layers"] = *p.crystallization.gap_layers;
      if (p.crystallization.gap_fraction)
        c["gap_fraction"] = *p.crystallization.gap_fraction;
      c["co_emerge"] = p.crystallization.co_emerge;
      c["open_ended"] = p.crystallization.open_ended;
      pj["crystallization"] = std::move(c);
    }
    arr.push_back(std::move(pj));
  }
  json j = manifest_header(manifest);
  j["profiles"] = std::move(arr);
  emit(manifest, path, j.dump(2) + "\n");
}

void write_steering_csv(RunManifest& manifest, const std::string& path,
                        const std::string& model_id,
                        const std::vector<SteeringResult>& results) {
  std::string body = csv_banner(manifest);
  body +=
      "model,family,layer,scale,delta_p,kl_collateral,efficiency,cd_target_rank,"
      "cd_target_value,d_norm,n_target,n_nontarget,baseline_p\n";
  for (const auto& r : results) {
    body += model_id + "," + r.family_id + "," + std::to_string(r.layer) + "," +
            fmt6(r.scale) + "," + fmt6(r.delta_p) + "," + opt6(r.kl_collateral) +
            "," + opt6(r.efficiency) + "," +
            (r.cd_target_rank > 0 ? std::to_string(r.cd_target_rank) : std::string()) +
            "," + fmt6(r.cd_target_value) + "," + fmt6(r.d_norm) + "," +
            std::to_string(r.n_target) + "," + std::to_string(r.n_nontarget) + "," +
            fmt6(r.baseline_p) + "\n";
  }
  emit(manifest, path, body);
}

void write_scatter_csv(RunManifest& manifest, const std::string& path,
                       const std::vector<FamilyPoint>& points) {
  std::string body = csv_banner(manifest);
  body += "peakalin,maxdp\n";
  for (const auto& p : points)
    body += fmt6(p.peak_a_lin) + "," + fmt6(p.max_delta_p) + "\n";
  emit(manifest, path, body);
}

void write_predict_summary_csv(RunManifest& manifest, const std::string& path,
                               const std::vector<FamilyPoint>& points) {
  std::string body = csv_banner(manifest);
  body += "family,peakalin,maxdp\n";
  for (const auto& p : points)
    body += p.family_id + "," + fmt6(p.peak_a_lin) + "," + fmt6(p.max_delta_p) + "\n";
  emit(manifest, path, body);
}

void write_lambda_dp_csv(RunManifest& manifest, const std::string& path,
                         const std::vector<std::array<double, 3>>& rows) {
  std::string body = csv_banner(manifest);
  body += "lambda,dp,alin\n";
  for (const auto& r : rows)
    body += fmt6(r[0]) + "," + fmt6(r[1]) + "," + fmt6(r[2]) + "\n";
  emit(manifest, path, body);
}

void write_diagnosis_json(RunManifest& manifest, const std::string& path,
                          const std::vector<Diagnosis>& diagnoses) {
  json arr = json::array();
  for (const auto& d : diagnoses) {
    arr.push_back({{"family", d.family_id},
                   {"verdict", verdict_name(d.verdict)},
                   {"peak_a_lin", d.peak_a_lin},
                   {"peak_layer", d.peak_layer},
                   {"recommended_layer", d.recommended_layer},
                   {"policy", layer_policy_name(d.policy)},
                   {"regime", regime_number(d.regime)},
                   {"warnings", d.warnings}});
  }
  json j = manifest_header(manifest);
  j["diagnoses"] = std::move(arr);
  emit(manifest, path, j.dump(2) + "\n");
}

void write_failure_json(RunManifest& manifest, const std::string& path,
                        const FailureReport& report, const std::string& family_id) {
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    json feats;
    for (int j2 = 0; j2 < kFailureFeatureCount; ++j2)
      feats[kFailureFeatureNames[j2]] = c.mean_raw[std::size_t(j2)];
    clusters.push_back({{"cluster_id", c.cluster_id},
                        {"taxonomy", failure_label_name(c.label)},
                        {"members", c.members},
                        {"mean_features", std::move(feats)}});
  }
  json by_k = json::array();
  for (const auto& [k, sil] : report.silhouette_by_k)
    by_k.push_back({{"k", k}, {"silhouette", sil}});
  json j = manifest_header(manifest);
  j["family"] = family_id;
  j["n_failed"] = report.n_failed;
  j["k"] = report.k;
  j["silhouette"] = report.silhouette;
  j["silhouette_by_k"] = std::move(by_k);
  j["clusters"] = std::move(clusters);
  if (report.n_failed == 0) j["notice"] = "no failed prompts";
  emit(manifest, path, j.dump(2) + "\n");
}

void write_correlation_json(RunManifest& manifest, const std::string& path,
                            const std::string& analysis, const SpearmanResult& corr,
                            int n, std::optional<double> floor, std::uint64_t seed,
                            const std::string& notes) {
  json j = manifest_header(manifest);
  j["analysis"] = analysis;
  j["n"] = n;
  if (corr.rho) j["rho_or_r"] = *corr.rho;
  if (corr.p) j["p"] = *corr.p;
  if (corr.constant_series) j["constant_series"] = true;
  if (floor) j["floor"] = *floor;
  j["seed"] = seed;
  j["notes"] = notes;
  emit(manifest, path, j.dump(2) + "\n");
}

void write_transcript_json(RunManifest& manifest, const std::string& path,
                           const std::vector<TranscriptEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries)
    arr.push_back({{"prompt", e.prompt},
                   {"layer", e.layer},
                   {"scale", e.scale},
                   {"before", e.before},
                   {"after", e.after}});
  json j = manifest_header(manifest);
  j["transcript"] = std::move(arr);
  emit(manifest, path, j.dump(2) + "\n");
}

std::uint64_t family_checksum(const ConceptFamily& family) {
  std::uint64_t h = fnv1a64(family.family_id);
  for (const auto& it : family.items) {
    h = fnv1a64(it.text, h);
    h = fnv1a64(it.answer, h);
    h = fnv1a64(it.class_label, h);
  }
  return h;
}

}  // namespace lap
