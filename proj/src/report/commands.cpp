#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "lap/error.hpp"
#include "lap/hash.hpp"
#include "lap/reference_model.hpp"
#include "lap/report.hpp"

namespace lap {

namespace fs = std::filesystem;

namespace {

std::string data_dir_or_default(const std::string& dir) {
  return dir.empty() ? default_data_dir() : dir;
}

ConceptFamily resolve_one_family(const std::string& selector,
                                 const std::string& model_id,
                                 const std::string& data_dir) {
  if (selector == "planted" || selector == "ref-planted" ||
      selector == "ref-planted-hidden") {
    if (!is_reference_id(model_id))
      throw data_error("family selector '" + selector +
                       "' is only available on reference models");
    ReferenceModelConfig cfg = parse_reference_id(model_id);
    return reference_planted_family(cfg);
  }
  if (selector == "unplanted" || selector == "ref-unplanted") {
    if (!is_reference_id(model_id))
      throw data_error("family selector '" + selector +
                       "' is only available on reference models");
    return reference_unplanted_family(parse_reference_id(model_id));
  }
  if (fs::is_directory(selector) && fs::exists(fs::path(selector) / "family.json"))
    return load_family_dir(selector);
  const fs::path builtin = fs::path(data_dir) / "families" / selector;
  if (fs::is_directory(builtin)) return load_family_dir(builtin.string());
  throw data_error("cannot resolve family selector '" + selector + "'");
}

std::vector<int> parse_layers(const std::string& sel, const ModelHandle& model,
                              const ActivationCapture& capture) {
  std::set<int> layers;
  std::stringstream ss(sel);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "all") {
      for (int l = 0; l < model.num_layers(); ++l) layers.insert(l);
    } else if (token == "mid") {
      layers.insert(model.num_layers() / 2);
    } else if (token == "lap") {
      LapProfile prof = lap_profile(model, capture, {});
      layers.insert(recommend_layer(prof, LayerPolicy::lap));
    } else {
      try {
        const int l = std::stoi(token);
        if (l < 0 || l >= model.num_layers())
          throw usage_error("--layers index " + token + " out of range [0, " +
                            std::to_string(model.num_layers()) + ")");
        layers.insert(l);
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        throw usage_error("bad --layers token '" + token + "'");
      }
    }
  }
  if (layers.empty()) throw usage_error("--layers selected no layers");
  return std::vector<int>(layers.begin(), layers.end());
}

std::vector<std::string> unrelated_for(const ModelHandle& model,
                                       const std::string& data_dir,
                                       const ConceptFamily& family) {
  std::vector<std::string> prompts;
  if (is_reference_id(model.model_id()))
    prompts = reference_unrelated_prompts(parse_reference_id(model.model_id()), 50);
  else
    prompts = load_unrelated_prompts(data_dir);
  // keep the set disjoint from the family under measurement
  std::set<std::string> family_texts;
  for (const auto& it : family.items) family_texts.insert(it.text);
  std::vector<std::string> kept;
  for (auto& p : prompts)
    if (!family_texts.count(p)) kept.push_back(std::move(p));
  return kept;
}

std::string pick_predict_target(const ConceptFamily& family) {
  if (family.kind == FamilyKind::controlled_binary && family.classes.size() == 2)
    return family.classes[1];
  std::map<std::string, int> counts;
  for (const auto& it : family.items) counts[it.answer]++;
  std::string best;
  int best_count = 0;
  for (const auto& [answer, count] : counts) {
    if (count > best_count) {
      best = answer;
      best_count = count;
    }
  }
  return best;
}

void write_exclusions(RunManifest& manifest, const std::string& out_dir,
                      const std::string& family_id, const ValidationReport& report) {
  if (report.exclusions.empty()) return;
  fs::create_directories(out_dir);
  const std::string path =
      (fs::path(out_dir) / ("exclusions_" + family_id + ".json")).string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw data_error("cannot write " + path);
  const std::string body = "{\n\"manifest_id\": \"" + manifest.manifest_id +
                           "\",\n\"tool_version\": \"" + manifest.tool_version +
                           "\",\n\"exclusions\": " + exclusion_report_json(report) +
                           "\n}";
  out << body << "\n";
  manifest.artifact_checksums["exclusions_" + family_id + ".json"] =
      hex64(fnv1a64(body));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot read " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (table.header.empty())
      table.header = std::move(cells);
    else
      table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw data_error("empty CSV: " + path);
  return table;
}

int column_index(const CsvTable& t, const std::string& name, const std::string& path) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return int(i);
  throw data_error("CSV " + path + " has no column '" + name + "'");
}

void require_full_capture(const ActivationCapture& cap, const ConceptFamily& family) {
  if (cap.num_prompts() != int(family.items.size())) {
    std::string msg = "steering requires every prompt captured, but " +
                      std::to_string(family.items.size() - std::size_t(cap.num_prompts())) +
                      " of family " + family.family_id + " failed:";
    for (const auto& e : cap.errors)
      msg += " [" + std::to_string(e.prompt_index) + "] " + e.reason + ";";
    throw data_error(msg);
  }
}

}  // namespace

std::vector<ConceptFamily> resolve_families(const std::vector<std::string>& selectors,
                                            const std::string& model_id,
                                            const std::string& data_dir) {
  if (selectors.empty()) throw usage_error("no families given");
  std::vector<ConceptFamily> fams;
  for (const auto& sel : selectors) {
    if (sel == "core") {
      for (auto& f : builtin_core_families(data_dir)) fams.push_back(std::move(f));
    } else if (sel == "controlled") {
      for (auto& f : builtin_controlled_families(data_dir))
        fams.push_back(std::move(f));
    } else {
      fams.push_back(resolve_one_family(sel, model_id, data_dir));
    }
  }
  return fams;
}

ActivationCapture cached_capture(const ModelHandle& model, const ConceptFamily& family,
                                 const std::string& cache_dir, std::uint64_t seed) {
  if (!family.validated)
    throw data_error("capture requested for unvalidated family " + family.family_id);
  const std::string root = cache_root(cache_dir);
  std::string dir;
  if (!root.empty()) {
    std::uint64_t key = fnv1a64(model.model_id());
    key = fnv1a64(&seed, sizeof(seed), key);
    const std::uint64_t fam_sum = family_checksum(family);
    key = fnv1a64(&fam_sum, sizeof(fam_sum), key);
    key = fnv1a64(model.backend().backend_version(), key);
    dir = (fs::path(root) / hex64(key)).string();
    if (fs::exists(fs::path(dir) / "manifest.json")) {
      try {
        ActivationCapture cap = load_capture(dir);
        if (cap.model_id == model.model_id() && cap.family_id == family.family_id &&
            cap.manifest.seed == seed &&
            cap.manifest.backend_version == model.backend().backend_version())
          return cap;
      } catch (const Error&) {
        // stale or corrupt cache entry: fall through to recapture
      }
    }
  }
  CaptureOptions opts;
  opts.seed = seed;
  ActivationCapture cap = capture_activations(model, family.items, family.family_id, opts);
  if (!dir.empty()) save_capture(cap, dir);
  return cap;
}

int cmd_profile(const ProfileCmdOptions& opts) {
  const std::string data_dir = data_dir_or_default(opts.common.data_dir);
  ModelHandle model = resolve_model(opts.common.model_id);
  std::vector<ConceptFamily> families =
      resolve_families(opts.families, opts.common.model_id, data_dir);

  std::vector<std::string> ids;
  for (const auto& f : families) ids.push_back(f.family_id);
  std::string config = std::string("probes=") + (opts.probes ? "1" : "0") +
                       ",lambda=" + (opts.lambda ? "1" : "0") +
                       ",rule=" + (opts.common.token_rule == TokenRule::last ? "last" : "first");
  RunManifest manifest =
      make_manifest("profile", opts.common.model_id, ids, opts.common.seed, config);

  std::vector<LapProfile> profiles;
  for (const auto& family : families) {
    auto [validated, report] =
        validate_single_token(family, model, opts.common.token_rule);
    write_exclusions(manifest, opts.common.out_dir, family.family_id, report);
    ActivationCapture cap =
        cached_capture(model, validated, opts.common.cache_dir, opts.common.seed);
    ProfileOptions popts;
    popts.probes = opts.probes;
    popts.lambda = opts.lambda;
    popts.seed = opts.common.seed;
    LapProfile prof = lap_profile(model, cap, popts);
    std::printf("profile %s: peak a_lin %.3f at L%d, regime %d\n",
                prof.family_id.c_str(), prof.peak_a_lin, prof.peak_layer,
                regime_number(prof.regime));
    profiles.push_back(std::move(prof));
  }

  fs::create_directories(opts.common.out_dir);
  write_profile_csv(manifest, (fs::path(opts.common.out_dir) / "profile.csv").string(),
                    profiles);
  write_figure_profile_csv(
      manifest, (fs::path(opts.common.out_dir) / "emergence.csv").string(), profiles);
  write_profile_json(manifest,
                     (fs::path(opts.common.out_dir) / "profile.json").string(),
                     profiles);
  write_manifest(manifest, opts.common.out_dir);
  return 0;
}

int cmd_steer(const SteerCmdOptions& opts) {
  const std::string data_dir = data_dir_or_default(opts.common.data_dir);
  if (opts.family.empty()) throw usage_error("steer: --family required");
  if (opts.target.empty()) throw usage_error("steer: --target required");
  ModelHandle model = resolve_model(opts.common.model_id);
  ConceptFamily family = resolve_one_family(opts.family, opts.common.model_id, data_dir);
  auto [validated, report] = validate_single_token(family, model, opts.common.token_rule);

  std::function<bool(const PromptItem&)> filter;
  std::string filter_note;
  if (opts.digit_filter) {
    const std::string target = opts.target;
    filter = [target](const PromptItem& item) {
      return item.text.find(target) != std::string::npos;
    };
    filter_note = "non-target prompts containing '" + opts.target + "' removed";
  }
  SteeringSpec spec = select_steering_target(validated, opts.target, filter, filter_note);
  ActivationCapture cap =
      cached_capture(model, validated, opts.common.cache_dir, opts.common.seed);
  require_full_capture(cap, validated);

  std::string scales_str;
  for (double s : opts.scales) scales_str += (scales_str.empty() ? "" : ";") + std::to_string(s);
  RunManifest manifest = make_manifest(
      "steer", opts.common.model_id, {validated.family_id}, opts.common.seed,
      "target=" + opts.target + ",layers=" + opts.layers + ",scales=" + scales_str +
          ",kl=" + (opts.kl ? "1" : "0"));
  write_exclusions(manifest, opts.common.out_dir, family.family_id, report);

  const std::vector<int> layers = parse_layers(opts.layers, model, cap);
  SweepOptions sweep_opts;
  if (opts.kl) sweep_opts.unrelated_prompts = unrelated_for(model, data_dir, validated);
  SweepResult sweep = steering_sweep(model, cap, spec, layers, opts.scales, sweep_opts);

  fs::create_directories(opts.common.out_dir);
  write_steering_csv(manifest,
                     (fs::path(opts.common.out_dir) / "steering.csv").string(),
                     model.model_id(), sweep.cells);

  if (opts.lambda) {
    std::vector<std::array<double, 3>> rows;
    for (int layer : layers) {
      const double lam = perturbation_sensitivity(model, cap, layer, 10, 0.01,
                                                  opts.common.seed);
      double dp = 0.0;
      for (const auto& cell : sweep.cells)
        if (cell.layer == layer && cell.scale == opts.scales.front())
          dp = cell.delta_p;
      rows.push_back({lam, dp, a_lin(model, cap, layer)});
    }
    write_lambda_dp_csv(manifest,
                        (fs::path(opts.common.out_dir) / "chaotic.csv").string(),
                        rows);
  }
  if (sweep.has_max)
    std::printf("steer %s target '%s': max delta_p %+0.4f at L%d scale %.2f\n",
                validated.family_id.c_str(), opts.target.c_str(), sweep.max_delta_p,
                sweep.max_dp_layer, sweep.max_dp_scale);

  if (opts.separability) {
    std::string body = "# manifest=" + manifest.manifest_id + " tool=" +
                       manifest.tool_version + "\nlayer,separability\n";
    for (int layer : layers) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%d,%.6f\n", layer,
                    separability(cap, spec, layer));
      body += buf;
    }
    const std::string path =
        (fs::path(opts.common.out_dir) / "separability.csv").string();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw data_error("cannot write " + path);
    out << body;
    manifest.artifact_checksums["separability.csv"] = hex64(fnv1a64(body));
  }

  if (opts.generate) {
    std::vector<TranscriptEntry> entries;
    const int n_prompts =
        std::min<int>(opts.generate_prompts, spec.n_nontarget());
    for (int layer : layers) {
      SteeringDirection dir = steering_direction(cap, spec, layer);
      const std::vector<float> vec = dir.vector_f32();
      for (int i = 0; i < n_prompts; ++i) {
        const PromptItem& item = cap.items[std::size_t(spec.nontarget_items[std::size_t(i)])];
        for (double scale : opts.scales) {
          TranscriptEntry e;
          e.prompt = item.text;
          e.layer = layer;
          e.scale = scale;
          e.before = generate_with_injection(model, item.text, layer, vec, 0.0,
                                             opts.max_tokens);
          e.after = generate_with_injection(model, item.text, layer, vec, scale,
                                            opts.max_tokens);
          entries.push_back(std::move(e));
        }
      }
    }
    write_transcript_json(manifest,
                          (fs::path(opts.common.out_dir) / "demo.json").string(),
                          entries);
  }
  write_manifest(manifest, opts.common.out_dir);
  return 0;
}

int cmd_predict(const PredictCmdOptions& opts) {
  const std::string data_dir = data_dir_or_default(opts.common.data_dir);
  ModelHandle model = resolve_model(opts.common.model_id);
  std::vector<ConceptFamily> families =
      resolve_families(opts.families, opts.common.model_id, data_dir);

  std::vector<std::string> ids;
  for (const auto& f : families) ids.push_back(f.family_id);
  RunManifest manifest = make_manifest(
      "predict", opts.common.model_id, ids, opts.common.seed,
      std::string("probes=") + (opts.probes ? "1" : "0") +
          ",scale=" + std::to_string(opts.scale) +
          (opts.floor ? ",floor=" + std::to_string(*opts.floor) : ""));

  std::vector<Diagnosis> diagnoses;
  std::vector<FamilyPoint> points;
  std::vector<int> all_layers(std::size_t(model.num_layers()));
  for (int l = 0; l < model.num_layers(); ++l) all_layers[std::size_t(l)] = l;

  for (const auto& family : families) {
    auto [validated, report] =
        validate_single_token(family, model, opts.common.token_rule);
    write_exclusions(manifest, opts.common.out_dir, family.family_id, report);
    ActivationCapture cap =
        cached_capture(model, validated, opts.common.cache_dir, opts.common.seed);
    ProfileOptions popts;
    popts.probes = opts.probes;
    popts.seed = opts.common.seed;
    LapProfile prof = lap_profile(model, cap, popts);

    const std::string target = pick_predict_target(validated);
    SteeringSpec spec = select_steering_target(validated, target);
    require_full_capture(cap, validated);
    SweepResult sweep = steering_sweep(model, cap, spec, all_layers, {opts.scale});

    SteeringContext ctx;
    ctx.n_target = spec.n_target();
    for (const auto& cell : sweep.cells)
      if (cell.layer == sweep.max_dp_layer) ctx.baseline_p = cell.baseline_p;
    Diagnosis diag = make_diagnosis(prof, LayerPolicy::lap, ctx);
    std::printf("predict %s: verdict %s, peak a_lin %.3f (L%d), max dp %+0.4f\n",
                diag.family_id.c_str(), verdict_name(diag.verdict), diag.peak_a_lin,
                diag.peak_layer, sweep.max_delta_p);
    diagnoses.push_back(std::move(diag));
    points.push_back({validated.family_id, prof.peak_a_lin, sweep.max_delta_p});
  }

  fs::create_directories(opts.common.out_dir);
  write_diagnosis_json(manifest,
                       (fs::path(opts.common.out_dir) / "diagnosis.json").string(),
                       diagnoses);
  write_scatter_csv(manifest, (fs::path(opts.common.out_dir) / "scatter.csv").string(),
                    points);
  write_predict_summary_csv(
      manifest, (fs::path(opts.common.out_dir) / "predict_summary.csv").string(),
      points);

  const std::string corr_path =
      (fs::path(opts.common.out_dir) / "correlation.json").string();
  if (points.size() >= 3) {
    SteerabilityCorr corr = steerability_correlation(points, opts.floor);
    write_correlation_json(manifest, corr_path, "steerability", corr.corr, corr.n,
                           opts.floor, opts.common.seed, "peak a_lin vs max delta_p");
    if (corr.corr.rho)
      std::printf("steerability rho = %+0.3f over %d families\n", *corr.corr.rho,
                  corr.n);
  } else {
    write_correlation_json(manifest, corr_path, "steerability", SpearmanResult{},
                           int(points.size()), opts.floor, opts.common.seed,
                           "skipped: need at least 3 families");
    std::printf("steerability correlation skipped (only %zu families)\n",
                points.size());
  }
  write_manifest(manifest, opts.common.out_dir);
  return 0;
}

int cmd_failures(const FailuresCmdOptions& opts) {
  const std::string data_dir = data_dir_or_default(opts.common.data_dir);
  if (opts.family.empty()) throw usage_error("failures: --family required");
  if (opts.target.empty()) throw usage_error("failures: --target required");
  ModelHandle model = resolve_model(opts.common.model_id);
  ConceptFamily family = resolve_one_family(opts.family, opts.common.model_id, data_dir);
  auto [validated, report] = validate_single_token(family, model, opts.common.token_rule);
  SteeringSpec spec = select_steering_target(validated, opts.target);
  ActivationCapture cap =
      cached_capture(model, validated, opts.common.cache_dir, opts.common.seed);
  require_full_capture(cap, validated);

  RunManifest manifest =
      make_manifest("failures", opts.common.model_id, {validated.family_id},
                    opts.common.seed, "target=" + opts.target + ",layer=" + opts.layer);
  write_exclusions(manifest, opts.common.out_dir, family.family_id, report);

  const std::vector<int> layers = parse_layers(opts.layer, model, cap);
  const int layer = layers.front();
  FailureAnalysis analysis =
      failure_features(model, cap, spec, layer, opts.scale, 10, opts.common.seed);
  ClusterOptions copts;
  copts.seed = opts.common.seed;
  FailureReport freport = cluster_failures(analysis, copts);
  std::printf("failures %s at L%d: %d failed, k=%d, silhouette %.3f\n",
              validated.family_id.c_str(), layer, freport.n_failed, freport.k,
              freport.silhouette);

  fs::create_directories(opts.common.out_dir);
  write_failure_json(manifest,
                     (fs::path(opts.common.out_dir) / "failures.json").string(),
                     freport, validated.family_id);
  write_manifest(manifest, opts.common.out_dir);
  return 0;
}

int cmd_correlate(const CorrelateCmdOptions& opts) {
  if (opts.source_csv.empty() || opts.target_csv.empty())
    throw usage_error("correlate: --source and --target CSV paths required");
  CsvTable src = read_csv(opts.source_csv);
  CsvTable dst = read_csv(opts.target_csv);
  const int src_fam = column_index(src, "family", opts.source_csv);
  const int src_val = column_index(src, "peakalin", opts.source_csv);
  const int dst_fam = column_index(dst, "family", opts.target_csv);
  const int dst_val = column_index(dst, "maxdp", opts.target_csv);

  std::vector<std::pair<std::string, double>> source, target;
  for (const auto& row : src.rows)
    source.push_back({row[std::size_t(src_fam)], std::stod(row[std::size_t(src_val)])});
  for (const auto& row : dst.rows)
    target.push_back({row[std::size_t(dst_fam)], std::stod(row[std::size_t(dst_val)])});

  CrossModelCorr corr = cross_model_correlation(source, target);
  RunManifest manifest = make_manifest(
      "correlate", "-", {}, opts.common.seed,
      "source=" + opts.source_csv + ",target=" + opts.target_csv);
  fs::create_directories(opts.common.out_dir);
  std::string notes = "cross-model join";
  if (!corr.missing.empty()) {
    notes += "; unmatched:";
    for (const auto& m : corr.missing) notes += " " + m;
  }
  write_correlation_json(
      manifest, (fs::path(opts.common.out_dir) / "correlation.json").string(),
      "cross_model", corr.corr, corr.n, std::nullopt, opts.common.seed, notes);
  if (corr.corr.rho)
    std::printf("cross-model rho = %+0.3f over %d families\n", *corr.corr.rho, corr.n);
  write_manifest(manifest, opts.common.out_dir);
  return 0;
}

}  // namespace lap
