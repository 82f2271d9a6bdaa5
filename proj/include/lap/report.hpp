#pragma once
// Run manifests, CSV/JSON emission, and the CLI command implementations.
// Every emitted file embeds the manifest id and tool version; re-running a
// command with an identical manifest reproduces the data files byte for
// byte on the reference backend.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lap/diagnosis.hpp"
#include "lap/lap.hpp"
#include "lap/stats.hpp"
#include "lap/steering.hpp"

namespace lap {

constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string manifest_id;
  std::string tool_version = kToolVersion;
  std::string command;
  std::string model_id;
  std::vector<std::string> family_ids;
  std::uint64_t seed = 0;
  std::string config_snapshot;  // canonical flag string, part of the id
  std::map<std::string, std::string> artifact_checksums;
  std::string started;
  std::string finished;
};

RunManifest make_manifest(const std::string& command, const std::string& model_id,
                          const std::vector<std::string>& family_ids,
                          std::uint64_t seed, const std::string& config_snapshot);

// Writes <out_dir>/manifest.json and returns its path. Checksums cover every
// artifact registered through the writers below.
std::string write_manifest(RunManifest& manifest, const std::string& out_dir);

// ---- writers (all register their checksum in the manifest) ----

void write_profile_csv(RunManifest& manifest, const std::string& path,
                       const std::vector<LapProfile>& profiles);
void write_figure_profile_csv(RunManifest& manifest, const std::string& path,
                              const std::vector<LapProfile>& profiles);
void write_profile_json(RunManifest& manifest, const std::string& path,
                        const std::vector<LapProfile>& profiles);
void write_steering_csv(RunManifest& manifest, const std::string& path,
                        const std::string& model_id,
                        const std::vector<SteeringResult>& results);
void write_scatter_csv(RunManifest& manifest, const std::string& path,
                       const std::vector<FamilyPoint>& points);
void write_predict_summary_csv(RunManifest& manifest, const std::string& path,
                               const std::vector<FamilyPoint>& points);
void write_lambda_dp_csv(RunManifest& manifest, const std::string& path,
                         const std::vector<std::array<double, 3>>& rows);
void write_diagnosis_json(RunManifest& manifest, const std::string& path,
                          const std::vector<Diagnosis>& diagnoses);
void write_failure_json(RunManifest& manifest, const std::string& path,
                        const FailureReport& report, const std::string& family_id);
void write_correlation_json(RunManifest& manifest, const std::string& path,
                            const std::string& analysis, const SpearmanResult& corr,
                            int n, std::optional<double> floor, std::uint64_t seed,
                            const std::string& notes);

struct TranscriptEntry {
  std::string prompt;
  int layer = 0;
  double scale = 0.0;
  std::string before;
  std::string after;
};
void write_transcript_json(RunManifest& manifest, const std::string& path,
                           const std::vector<TranscriptEntry>& entries);

// ---- CLI command implementations ----

struct CommonOptions {
  std::string model_id;
  std::uint64_t seed = 0;
  std::string out_dir = "lap-out";
  std::string cache_dir;  // empty: LAP_CACHE_DIR or disabled
  std::string data_dir;   // empty: default_data_dir()
  TokenRule token_rule = TokenRule::last;
};

struct ProfileCmdOptions {
  CommonOptions common;
  std::vector<std::string> families;  // selectors
  bool probes = false;
  bool lambda = false;
};

struct SteerCmdOptions {
  CommonOptions common;
  std::string family;
  std::string target;
  bool digit_filter = false;  // drop non-target prompts containing the target text
  std::string layers = "all";  // all | mid | lap | comma-separated indices
  std::vector<double> scales = {1.0};
  bool kl = true;
  bool lambda = false;  // per-layer sensitivity + lambda/dp/alin export
  bool generate = false;
  bool separability = false;
  int max_tokens = 8;
  int generate_prompts = 3;
};

struct PredictCmdOptions {
  CommonOptions common;
  std::vector<std::string> families;
  bool probes = true;
  std::optional<double> floor;
  double scale = 1.0;
};

struct FailuresCmdOptions {
  CommonOptions common;
  std::string family;
  std::string target;
  std::string layer = "lap";
  double scale = 1.0;
};

struct CorrelateCmdOptions {
  CommonOptions common;
  std::string source_csv;  // predict summary of model A (peak a_lin)
  std::string target_csv;  // predict summary of model B (max delta_p)
};

int cmd_profile(const ProfileCmdOptions& opts);
int cmd_steer(const SteerCmdOptions& opts);
int cmd_predict(const PredictCmdOptions& opts);
int cmd_failures(const FailuresCmdOptions& opts);
int cmd_correlate(const CorrelateCmdOptions& opts);

// Resolve family selectors ("core", "controlled", a builtin id, a reference
// family name, or a path to a family directory) into loaded families.
std::vector<ConceptFamily> resolve_families(const std::vector<std::string>& selectors,
                                            const std::string& model_id,
                                            const std::string& data_dir);

// Capture with optional directory cache keyed on
// (model_id, family checksum, backend version, seed).
ActivationCapture cached_capture(const ModelHandle& model, const ConceptFamily& family,
                                 const std::string& cache_dir, std::uint64_t seed);

std::uint64_t family_checksum(const ConceptFamily& family);

}  // namespace lap
