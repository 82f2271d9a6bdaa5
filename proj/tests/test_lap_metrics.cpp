#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lap/error.hpp"
#include "lap/lap.hpp"
#include "lap/reference_model.hpp"
#include "lap/rng.hpp"
#include "test_support.hpp"

using namespace lap;

namespace {

ReferenceModelConfig small_config() {
  ReferenceModelConfig cfg;
  cfg.num_layers = 4;
  cfg.writer_layer = 2;
  return cfg;
}

ActivationCapture planted_capture(const ModelHandle& model,
                                  const ReferenceModelConfig& cfg) {
  auto [fam, rep] = validate_single_token(reference_planted_family(cfg), model);
  return capture_activations(model, fam.items, fam.family_id);
}

// two orthonormal rows, identity blocks; states chosen by hand
ModelHandle two_token_model() {
  return testing::make_linear_model({"<unk>", "x"}, {1.0, 0.0, 0.0, 1.0},
                                    testing::make_readout(2, 2, {1.0, 0.0, 0.0, 1.0}));
}

}  // namespace

TEST_CASE("a_lin at the final layer equals model top-1 accuracy") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  for (const ConceptFamily& raw :
       {reference_planted_family(cfg), reference_unplanted_family(cfg)}) {
    auto [fam, rep] = validate_single_token(raw, model);
    ActivationCapture cap = capture_activations(model, fam.items, fam.family_id);
    int correct = 0;
    for (int p = 0; p < cap.num_prompts(); ++p)
      if (cap.model_top1[std::size_t(p)] == cap.answer_token_ids[std::size_t(p)])
        ++correct;
    const double top1 = double(correct) / double(cap.num_prompts());
    CHECK(a_lin(model, cap, cfg.num_layers - 1) == top1);
  }
}

TEST_CASE("a_lin breaks readout ties toward the lowest token id") {
  ModelHandle model = two_token_model();
  // state orthogonal to both rows: logits (0, 0), argmax -> token 0
  std::vector<std::vector<std::vector<float>>> states = {{{0.0f, 0.0f}, {0.0f, 0.0f}}};
  ActivationCapture cap = testing::make_capture(model, "tie", states, {0, 1});
  CHECK(a_lin(model, cap, 0) == 0.5);  // only the answer-0 prompt matches
}

TEST_CASE("a_lin range checks") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  ActivationCapture cap = planted_capture(model, cfg);
  CHECK_THROWS_AS(a_lin(model, cap, -1), Error);
  CHECK_THROWS_AS(a_lin(model, cap, cfg.num_layers), Error);
}

TEST_CASE("accuracy split recomputed by hand on a four-prompt capture") {
  ModelHandle model = two_token_model();
  // layer 0 states and final states differ; top1 comes from the final layer
  std::vector<std::vector<std::vector<float>>> states = {
      // layer 0: lens hits for prompts 0 and 2
      {{1.0f, 0.0f}, {1.0f, 0.0f}, {0.0f, 1.0f}, {1.0f, 0.0f}},
      // final layer decides model_top1: {0, 0, 1, 1}
      {{1.0f, 0.0f}, {1.0f, 0.0f}, {0.0f, 1.0f}, {0.0f, 1.0f}},
  };
  // answers: {0, 1, 1, 0} -> model correct on prompts 0 and 2
  ActivationCapture cap = testing::make_capture(model, "split", states, {0, 1, 1, 0});
  auto [acc_a, acc_b] = accuracy_split(model, cap, 0);
  // model-correct prompts {0, 2}: lens hits 0 (yes) and 2 (yes) -> 1.0
  // model-wrong prompts {1, 3}: lens answer-1 at layer0? prompt1 lens=0 vs
  // answer 1 (miss); prompt3 lens=0 vs answer 0 (hit) -> 0.5
  REQUIRE(acc_a);
  REQUIRE(acc_b);
  CHECK(*acc_a == 1.0);
  CHECK(*acc_b == 0.5);
}

TEST_CASE("accuracy split returns null on an empty subset") {
  ModelHandle model = two_token_model();
  std::vector<std::vector<std::vector<float>>> states = {
      {{1.0f, 0.0f}, {0.0f, 1.0f}},
      {{1.0f, 0.0f}, {0.0f, 1.0f}},
  };
  // answers equal top1 everywhere: acc_b has no prompts
  ActivationCapture cap = testing::make_capture(model, "allright", states, {0, 1});
  auto [acc_a, acc_b] = accuracy_split(model, cap, 0);
  REQUIRE(acc_a);
  CHECK(*acc_a == 1.0);
  CHECK(!acc_b);
}

TEST_CASE("crystallization gap on digitized 26-layer profiles") {
  // sequence-style: nonlinear detection at L1, linear emergence at L19
  std::vector<double> mlp(26, 0.0), lin(26, 0.0);
  mlp[0] = 0.30;
  for (int l = 1; l < 26; ++l) mlp[std::size_t(l)] = 0.91;
  for (int l = 19; l < 26; ++l) lin[std::size_t(l)] = 0.15 + 0.02 * (l - 19);
  CrystallizationGap gap = crystallization_gap_series(mlp, lin);
  REQUIRE(gap.mlp_layer);
  REQUIRE(gap.lin_layer);
  CHECK(*gap.mlp_layer == 1);
  CHECK(*gap.lin_layer == 19);
  CHECK(*gap.gap_layers == 18);
  CHECK(!gap.co_emerge);
  REQUIRE(gap.gap_fraction);
  CHECK(int(std::lround(*gap.gap_fraction * 100)) == 69);
}

TEST_CASE("negative crystallization gaps are flagged co-emerge") {
  // analogy-style: linear at L17 before nonlinear detection at L20
  std::vector<double> mlp(26, 0.0), lin(26, 0.0);
  for (int l = 20; l < 26; ++l) mlp[std::size_t(l)] = 0.63;
  for (int l = 17; l < 26; ++l) lin[std::size_t(l)] = 0.2;
  CrystallizationGap gap = crystallization_gap_series(mlp, lin);
  CHECK(*gap.gap_layers == -3);
  CHECK(gap.co_emerge);
  CHECK(!gap.gap_fraction);
}

TEST_CASE("same-layer crossing gives gap zero") {
  std::vector<double> mlp = {0.0, 0.8, 0.9};
  std::vector<double> lin = {0.0, 0.2, 0.4};
  CrystallizationGap gap = crystallization_gap_series(mlp, lin);
  CHECK(*gap.gap_layers == 0);
  CHECK(!gap.co_emerge);
  CHECK(*gap.gap_fraction == 0.0);
}

TEST_CASE("uncrossed thresholds produce an open-ended marker") {
  std::vector<double> mlp = {0.1, 0.2, 0.3};
  std::vector<double> lin = {0.0, 0.2, 0.4};
  CrystallizationGap gap = crystallization_gap_series(mlp, lin);
  CHECK(gap.open_ended);
  CHECK(!gap.gap_layers);
}

TEST_CASE("gap is antisymmetric under swapping the two series") {
  std::vector<double> mlp(10, 0.0), lin(10, 0.0);
  for (int l = 2; l < 10; ++l) mlp[std::size_t(l)] = 0.9;
  for (int l = 7; l < 10; ++l) lin[std::size_t(l)] = 0.9;
  CrystallizationGap fwd = crystallization_gap_series(mlp, lin, 0.5, 0.5);
  CrystallizationGap rev = crystallization_gap_series(lin, mlp, 0.5, 0.5);
  CHECK(*fwd.gap_layers == -*rev.gap_layers);
  CHECK(fwd.co_emerge != rev.co_emerge);
}

TEST_CASE("regime classification follows the thresholds") {
  LapProfile p;
  p.layers.resize(4);
  // geography-like: high probe ceiling, lens clears the go threshold
  p.peak_a_mlp = 1.0;
  p.peak_a_lin = 0.28;
  CHECK(classify_regime(p) == Regime::output_aligned);
  // represented but not aligned
  p.peak_a_mlp = 0.95;
  p.peak_a_lin = 0.0;
  CHECK(classify_regime(p) == Regime::not_output_aligned);
  // nothing represented
  p.peak_a_mlp = 0.33;
  p.peak_a_lin = 0.0;
  CHECK(classify_regime(p) == Regime::not_represented);
  // probes not run
  p.peak_a_mlp.reset();
  CHECK(classify_regime(p) == Regime::undetermined);
}

TEST_CASE("lap_profile assembles peaks with the smallest-layer tie-break") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  ActivationCapture cap = planted_capture(model, cfg);
  LapProfile prof = lap_profile(model, cap, {});
  CHECK(prof.layers.size() == 4);
  CHECK(prof.peak_a_lin == 1.0);
  CHECK(prof.peak_layer == cfg.writer_layer);  // first layer attaining the peak
  CHECK(prof.final_layer == cfg.num_layers - 1);
  CHECK(prof.regime == Regime::undetermined);  // no probes requested
  // acc split present by default; all-zero layers have acc_a defined
  CHECK(prof.layers[0].acc_a);
}

TEST_CASE("a monotone logit cap leaves a_lin unchanged") {
  Rng rng(derive_seed(101, "softcap-alin"));
  const int v = 7, d = 3;
  std::vector<double> rows = rng.gaussian_vector(std::size_t(v * d));
  ReadoutSpec plain = testing::make_readout(v, d, rows);
  ReadoutSpec capped = testing::make_readout(v, d, rows);
  capped.softcap = 4.0;
  ModelHandle model_plain =
      testing::make_linear_model({"<unk>", "x"}, rows, plain);
  ModelHandle model_capped =
      testing::make_linear_model({"<unk>", "x"}, rows, capped);

  std::vector<std::vector<float>> layer0;
  std::vector<int> answers;
  for (int i = 0; i < 40; ++i) {
    std::vector<float> state;
    for (int j = 0; j < d; ++j) state.push_back(float(6.0 * rng.gaussian()));
    layer0.push_back(std::move(state));
    answers.push_back(i % v);
  }
  ActivationCapture cap_plain =
      testing::make_capture(model_plain, "cap", {layer0}, answers);
  ActivationCapture cap_capped =
      testing::make_capture(model_capped, "cap", {layer0}, answers);
  CHECK(a_lin(model_plain, cap_plain, 0) == a_lin(model_capped, cap_capped, 0));
  CHECK(cap_plain.model_top1 == cap_capped.model_top1);
}

TEST_CASE("all-zero profile peaks at layer zero") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  auto [fam, rep] = validate_single_token(reference_unplanted_family(cfg), model);
  ActivationCapture cap = capture_activations(model, fam.items, fam.family_id);
  LapProfile prof = lap_profile(model, cap, {});
  CHECK(prof.peak_a_lin == 0.0);
  CHECK(prof.peak_layer == 0);
}
