// lap: layer-accessibility diagnostics and steering-vector prediction for
// causal language models. See README for the command reference.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "lap/error.hpp"
#include "lap/report.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LAP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      return 0;
    }
  }
  return 0;
}

void add_common(CLI::App* cmd, lap::CommonOptions& common, std::string& rule,
                bool needs_model = true) {
  auto* model = cmd->add_option("--model", common.model_id, "model id (ref:... )");
  if (needs_model) model->required();
  cmd->add_option("--seed", common.seed, "run seed (default LAP_SEED or 0)");
  cmd->add_option("--out", common.out_dir, "output directory");
  cmd->add_option("--cache", common.cache_dir, "activation cache root");
  cmd->add_option("--data", common.data_dir, "data directory (families, prompts)");
  cmd->add_option("--token-rule", rule, "answer tokenization rule: last|first")
      ->check(CLI::IsMember({"last", "first"}));
}

lap::TokenRule parse_rule(const std::string& rule) {
  return rule == "first" ? lap::TokenRule::first : lap::TokenRule::last;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layer accessibility profiling and steering diagnostics"};
  app.require_subcommand(1);

  lap::ProfileCmdOptions profile_opts;
  profile_opts.common.seed = default_seed();
  std::string profile_rule = "last";
  auto* profile = app.add_subcommand("profile", "per-layer accessibility profile");
  add_common(profile, profile_opts.common, profile_rule);
  profile->add_option("--families", profile_opts.families,
                      "family selectors (core, controlled, ids, paths)")
      ->required()
      ->delimiter(',');
  profile->add_flag("--probes,!--no-probes", profile_opts.probes,
                    "train residual probes per layer");
  profile->add_flag("--lambda,!--no-lambda", profile_opts.lambda,
                    "measure perturbation sensitivity per layer");

  lap::SteerCmdOptions steer_opts;
  steer_opts.common.seed = default_seed();
  std::string steer_rule = "last";
  auto* steer = app.add_subcommand("steer", "difference-of-means steering sweep");
  add_common(steer, steer_opts.common, steer_rule);
  steer->add_option("--family", steer_opts.family, "family selector")->required();
  steer->add_option("--target", steer_opts.target, "target answer token")->required();
  steer->add_option("--layers", steer_opts.layers,
                    "layer selection: all | mid | lap | comma list");
  steer->add_option("--scales", steer_opts.scales, "injection scales")
      ->delimiter(',');
  steer->add_flag("--kl,!--no-kl", steer_opts.kl,
                  "measure collateral KL on unrelated prompts");
  steer->add_flag("--digit-filter", steer_opts.digit_filter,
                  "drop non-target prompts whose text contains the target");
  steer->add_flag("--lambda,!--no-lambda", steer_opts.lambda,
                  "emit per-layer sensitivity vs delta_p CSV");
  steer->add_flag("--generate", steer_opts.generate,
                  "emit before/after generation transcripts");
  steer->add_flag("--separability", steer_opts.separability,
                  "emit per-layer separability CSV");
  steer->add_option("--max-tokens", steer_opts.max_tokens, "generation length");

  lap::PredictCmdOptions predict_opts;
  predict_opts.common.seed = default_seed();
  std::string predict_rule = "last";
  auto* predict = app.add_subcommand("predict", "go/no-go steerability prediction");
  add_common(predict, predict_opts.common, predict_rule);
  predict->add_option("--families", predict_opts.families, "family selectors")
      ->required()
      ->delimiter(',');
  predict->add_flag("--probes,!--no-probes", predict_opts.probes,
                    "train probes (regime classification)");
  double floor_val = -1.0;
  auto* floor_opt = predict->add_option(
      "--floor", floor_val, "restrict correlation to peak a_lin above this");
  predict->add_option("--scale", predict_opts.scale, "injection scale for the sweep");

  lap::FailuresCmdOptions failures_opts;
  failures_opts.common.seed = default_seed();
  std::string failures_rule = "last";
  auto* failures = app.add_subcommand("failures", "failure-mode clustering");
  add_common(failures, failures_opts.common, failures_rule);
  failures->add_option("--family", failures_opts.family, "family selector")->required();
  failures->add_option("--target", failures_opts.target, "target answer token")
      ->required();
  failures->add_option("--layer", failures_opts.layer, "layer (index, mid or lap)");
  failures->add_option("--scale", failures_opts.scale, "injection scale");

  lap::CorrelateCmdOptions correlate_opts;
  correlate_opts.common.seed = default_seed();
  std::string correlate_rule = "last";
  auto* correlate = app.add_subcommand("correlate", "cross-model correlation");
  add_common(correlate, correlate_opts.common, correlate_rule, false);
  correlate->add_option("--source", correlate_opts.source_csv,
                        "predict_summary.csv of the source model")
      ->required();
  correlate->add_option("--target", correlate_opts.target_csv,
                        "predict_summary.csv of the target model")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (profile->parsed()) {
      profile_opts.common.token_rule = parse_rule(profile_rule);
      return lap::cmd_profile(profile_opts);
    }
    if (steer->parsed()) {
      steer_opts.common.token_rule = parse_rule(steer_rule);
      return lap::cmd_steer(steer_opts);
    }
    if (predict->parsed()) {
      predict_opts.common.token_rule = parse_rule(predict_rule);
      if (floor_opt->count() > 0) predict_opts.floor = floor_val;
      return lap::cmd_predict(predict_opts);
    }
    if (failures->parsed()) {
      failures_opts.common.token_rule = parse_rule(failures_rule);
      return lap::cmd_failures(failures_opts);
    }
    if (correlate->parsed()) {
      return lap::cmd_correlate(correlate_opts);
    }
  } catch (const lap::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
  return 2;
}
