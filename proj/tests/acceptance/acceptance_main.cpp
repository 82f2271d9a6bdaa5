// Acceptance suite: every criterion runs on the built-in reference model (no
// downloads) and prints one PASS/FAIL line. The process exits nonzero if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lap/diagnosis.hpp"
#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/lap.hpp"
#include "lap/reference_model.hpp"
#include "lap/rng.hpp"
#include "lap/stats.hpp"
#include "lap/steering.hpp"
#include "../test_support.hpp"

using namespace lap;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

ReferenceModelConfig base_config(bool nonlinear = false) {
  ReferenceModelConfig cfg;
  cfg.num_layers = 4;
  cfg.writer_layer = 2;
  cfg.nonlinear_plant = nonlinear;
  return cfg;
}

ActivationCapture capture_of(const ModelHandle& model, const ConceptFamily& raw) {
  auto [fam, rep] = validate_single_token(raw, model);
  return capture_activations(model, fam.items, fam.family_id);
}

ProbeConfig fast_probe() {
  ProbeConfig cfg;
  cfg.hidden_width = 64;
  cfg.batch_size = 16;
  return cfg;
}

// ---- criterion 1: readout identity -------------------------------------------------

void criterion_readout_identity() {
  bool pass = true;
  std::string detail;
  for (bool nonlinear : {false, true}) {
    const ReferenceModelConfig cfg = base_config(nonlinear);
    ModelHandle model = build_reference_model(cfg);
    for (const ConceptFamily& raw :
         {reference_planted_family(cfg), reference_unplanted_family(cfg)}) {
      ActivationCapture cap = capture_of(model, raw);
      int top1_hits = 0;
      for (int p = 0; p < cap.num_prompts(); ++p) {
        std::vector<float> logits = readout_logits(
            model, cap.state(cfg.num_layers - 1, p), cfg.num_layers - 1);
        const int argmax = int(kernels::argmax_f32(logits.data(), logits.size()));
        if (argmax != cap.model_top1[std::size_t(p)]) pass = false;
        if (cap.model_top1[std::size_t(p)] == cap.answer_token_ids[std::size_t(p)])
          ++top1_hits;
      }
      const double top1 = double(top1_hits) / double(cap.num_prompts());
      if (a_lin(model, cap, cfg.num_layers - 1) != top1) pass = false;
    }
  }
  report(1, "readout identity (final-layer a_lin equals model top-1, exact argmax)",
         pass);
}

// ---- criterion 2: three regimes ----------------------------------------------------

void criterion_three_regimes() {
  bool pass = true;
  std::string detail;

  ProfileOptions popts;
  popts.probes = true;
  popts.probe = fast_probe();

  // linear plant: exact step profile, delta_p thresholds, regime 3
  {
    const ReferenceModelConfig cfg = base_config(false);
    ModelHandle model = build_reference_model(cfg);
    auto [fam, rep] = validate_single_token(reference_planted_family(cfg), model);
    ActivationCapture cap = capture_activations(model, fam.items, fam.family_id);
    for (int l = 0; l < cfg.num_layers; ++l) {
      const double expected = l >= cfg.writer_layer ? 1.0 : 0.0;
      if (a_lin(model, cap, l) != expected) {
        pass = false;
        detail = "step profile broken at layer " + std::to_string(l);
      }
    }
    SteeringSpec spec = select_steering_target(fam, "beta");
    for (int l = 0; l < cfg.num_layers; ++l) {
      const double dp = measure_delta_p(model, cap, spec, l, 1.0).delta_p;
      if (l >= cfg.writer_layer && dp < 0.5) {
        pass = false;
        detail = "delta_p below 0.5 at layer " + std::to_string(l);
      }
      if (l < cfg.writer_layer && std::fabs(dp) > 0.01) {
        pass = false;
        detail = "delta_p above 0.01 before the writer";
      }
    }
    LapProfile prof = lap_profile(model, cap, popts);
    if (prof.regime != Regime::output_aligned) {
      pass = false;
      detail = "linear plant not classified regime 3";
    }
  }

  // hidden plant: lens blind everywhere, probe recovers, regime 2
  {
    const ReferenceModelConfig cfg = base_config(true);
    ModelHandle model = build_reference_model(cfg);
    ActivationCapture cap = capture_of(model, reference_planted_family(cfg));
    for (int l = 0; l < cfg.num_layers; ++l)
      if (a_lin(model, cap, l) != 0.0) {
        pass = false;
        detail = "hidden plant leaked into the lens";
      }
    TrainedProbe probe = train_residual_probe(model, cap, cfg.writer_layer, fast_probe());
    const ProbeAccuracy acc = a_mlp_detail(model, cap, probe, cfg.writer_layer);
    if (acc.train < 0.95) {
      pass = false;
      detail = "probe train accuracy " + std::to_string(acc.train) + " < 0.95";
    }
    LapProfile prof = lap_profile(model, cap, popts);
    if (prof.regime != Regime::not_output_aligned) {
      pass = false;
      detail = "hidden plant not classified regime 2";
    }
  }

  // no plant: regime 1
  {
    const ReferenceModelConfig cfg = base_config(false);
    ModelHandle model = build_reference_model(cfg);
    ActivationCapture cap = capture_of(model, reference_unplanted_family(cfg));
    LapProfile prof = lap_profile(model, cap, popts);
    if (prof.regime != Regime::not_represented) {
      pass = false;
      detail = "unplanted family not classified regime 1";
    }
  }
  report(2, "three-regime reproduction on the reference model", pass, detail);
}

// ---- criterion 3: probe identity ---------------------------------------------------

void criterion_probe_identity() {
  bool pass = true;
  std::string detail;
  const ReferenceModelConfig cfg = base_config(false);
  ModelHandle model = build_reference_model(cfg);
  for (const ConceptFamily& raw :
       {reference_planted_family(cfg), reference_unplanted_family(cfg)}) {
    ActivationCapture cap = capture_of(model, raw);
    for (int l = 0; l < cfg.num_layers; ++l) {
      TrainedProbe identity = make_identity_probe(model, cap, l);
      if (a_mlp(model, cap, identity, l) != a_lin(model, cap, l)) {
        pass = false;
        detail = "identity probe differs from a_lin at layer " + std::to_string(l);
      }
    }
  }
  // trained probes never lose more than 0.01 train accuracy vs the lens
  ActivationCapture cap = capture_of(model, reference_planted_family(cfg));
  for (int l = 0; l < cfg.num_layers; ++l) {
    TrainedProbe probe = train_residual_probe(model, cap, l, fast_probe());
    ProbeAccuracy acc = a_mlp_detail(model, cap, probe, l);
    int hits = 0;
    for (int idx : probe.train_indices) {
      std::vector<float> logits = readout_logits(model, cap.state(l, idx), l);
      if (int(kernels::argmax_f32(logits.data(), logits.size())) ==
          cap.answer_token_ids[std::size_t(idx)])
        ++hits;
    }
    const double lens_train = double(hits) / double(probe.train_indices.size());
    if (acc.train < lens_train - 0.01) {
      pass = false;
      detail = "trained probe fell below the lens on its train split";
    }
  }
  report(3, "probe identity at init and no train-split regression", pass, detail);
}

// ---- criterion 4: lambda oracle ----------------------------------------------------

void criterion_lambda_oracle() {
  bool pass = true;
  std::string detail;
  const ReferenceModelConfig cfg = base_config(false);
  ModelHandle model = build_reference_model(cfg);
  const ReferenceBackend& ref = reference_backend(model);
  ActivationCapture cap = capture_of(model, reference_planted_family(cfg));

  for (int layer = cfg.writer_layer; layer < cfg.num_layers; ++layer) {
    const std::vector<double> m = ref.tail_matrix(layer);
    const int d = cfg.hidden_dim, v = cfg.vocab_size;
    double oracle = 0.0;
    for (int p = 0; p < cap.num_prompts(); ++p) {
      double prompt_sum = 0.0;
      for (int kk = 0; kk < 10; ++kk) {
        Rng rng(derive_seed(5, "lambda-dir", std::uint64_t(layer), std::uint64_t(p),
                            std::uint64_t(kk)));
        std::vector<double> eps = unit_direction(rng, std::size_t(d));
        double ss = 0.0;
        for (int row = 0; row < v; ++row) {
          double dot = 0.0;
          for (int c = 0; c < d; ++c)
            dot += m[std::size_t(row) * std::size_t(d) + std::size_t(c)] *
                   eps[std::size_t(c)];
          ss += dot * dot;
        }
        prompt_sum += std::sqrt(ss);
      }
      oracle += prompt_sum / 10.0;
    }
    oracle /= double(cap.num_prompts());
    const double measured = perturbation_sensitivity(model, cap, layer, 10, 0.01, 5);
    if (std::fabs(measured - oracle) > 1e-6 * std::max(1.0, std::fabs(oracle))) {
      pass = false;
      detail = "layer " + std::to_string(layer) + ": measured " +
               std::to_string(measured) + " vs oracle " + std::to_string(oracle);
    }
    if (perturbation_sensitivity(model, cap, layer, 10, 0.01, 5) != measured) {
      pass = false;
      detail = "lambda not deterministic under a fixed seed";
    }
  }
  report(4, "lambda matches the linear-tail matrix oracle within 1e-6", pass, detail);
}

// ---- criterion 5: statistics oracles -----------------------------------------------

void criterion_statistics() {
  bool pass = true;
  std::string detail;

  // rank enumeration oracle
  {
    const std::vector<double> x = {0.1, 0.5, 0.5, 0.9, 0.2, 0.7};
    const std::vector<double> y = {1.0, 3.0, 2.0, 5.0, 0.0, 5.0};
    auto ranks = [](const std::vector<double>& v) {
      std::vector<double> r(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        int less = 0, equal = 0;
        for (double w : v) {
          if (w < v[i]) ++less;
          if (w == v[i]) ++equal;
        }
        r[i] = less + 0.5 * (equal + 1);
      }
      return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      mx += rx[i];
      my += ry[i];
    }
    mx /= 6;
    my /= 6;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      sxy += (rx[i] - mx) * (ry[i] - my);
      sxx += (rx[i] - mx) * (rx[i] - mx);
      syy += (ry[i] - my) * (ry[i] - my);
    }
    const double oracle = sxy / std::sqrt(sxx * syy);
    const double got = spearman(x, y).rho.value();
    if (std::fabs(got - oracle) > 1e-9) {
      pass = false;
      detail = "spearman vs rank oracle";
    }
  }

  // residual-regression oracle for the partial correlation
  {
    const std::vector<double> x = {1.0, 2.0, 3.0, 5.0, 8.0};
    const std::vector<double> y = {2.0, 1.0, 4.0, 4.0, 9.0};
    const std::vector<double> z = {0.0, 1.0, 2.0, 3.0, 4.0};
    auto residual = [&](const std::vector<double>& s) {
      double mz = 0, ms = 0;
      for (std::size_t i = 0; i < 5; ++i) {
        mz += z[i];
        ms += s[i];
      }
      mz /= 5;
      ms /= 5;
      double num = 0, den = 0;
      for (std::size_t i = 0; i < 5; ++i) {
        num += (z[i] - mz) * (s[i] - ms);
        den += (z[i] - mz) * (z[i] - mz);
      }
      std::vector<double> r(5);
      for (std::size_t i = 0; i < 5; ++i)
        r[i] = s[i] - (ms + num / den * (z[i] - mz));
      return r;
    };
    const std::vector<double> rx = residual(x), ry = residual(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      sxy += rx[i] * ry[i];
      sxx += rx[i] * rx[i];
      syy += ry[i] * ry[i];
    }
    const double oracle = sxy / std::sqrt(sxx * syy);
    const double got = pearson_partial(x, y, z).r.value();
    if (std::fabs(got - oracle) > 1e-9) {
      pass = false;
      detail = "partial correlation vs residual oracle";
    }
  }

  // exhaustive permutation oracle on 2 families x 3 layers
  {
    GroupedSeries series;
    series.family_ids = {"a", "b"};
    series.x_by_family = {{0.0, 0.3, 0.7}, {0.1, 0.4, 0.6}};
    series.y_by_family = {{0.01, 0.05, 0.20}, {0.00, 0.08, 0.15}};
    PermutationResult res = within_family_permutation(series, 10000, 0);

    std::vector<double> x_pool;
    for (const auto& g : series.x_by_family)
      x_pool.insert(x_pool.end(), g.begin(), g.end());
    std::vector<double> y_obs;
    for (const auto& g : series.y_by_family)
      y_obs.insert(y_obs.end(), g.begin(), g.end());
    const double observed = spearman(x_pool, y_obs).rho.value();
    std::vector<double> a = series.y_by_family[0], b = series.y_by_family[1];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    int count = 0, total = 0;
    std::vector<double> pa = a;
    do {
      std::vector<double> pb = b;
      do {
        std::vector<double> y_pool = pa;
        y_pool.insert(y_pool.end(), pb.begin(), pb.end());
        ++total;
        if (spearman(x_pool, y_pool).rho.value_or(-2.0) >= observed - 1e-15) ++count;
      } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pa.begin(), pa.end()));
    const double oracle_p = double(count) / double(total);
    if (std::fabs(res.p - oracle_p) > 1e-9 || total != 36) {
      pass = false;
      detail = "permutation p vs exhaustive enumeration";
    }
    if (res.p < 1.0 / double(10000 + 1) || res.p > 1.0) {
      pass = false;
      detail = "permutation p outside its bounds";
    }
  }
  report(5, "statistics match brute-force oracles within 1e-9", pass, detail);
}

// ---- criterion 6: steering math ----------------------------------------------------

void criterion_steering_math() {
  bool pass = true;
  std::string detail;
  const ReferenceModelConfig cfg = base_config(false);
  ModelHandle model = build_reference_model(cfg);
  auto [fam, rep] = validate_single_token(reference_planted_family(cfg), model);
  ActivationCapture cap = capture_activations(model, fam.items, fam.family_id);
  SteeringSpec spec = select_steering_target(fam, "beta");

  for (int l = 0; l < cfg.num_layers; ++l)
    if (measure_delta_p(model, cap, spec, l, 0.0).delta_p != 0.0) {
      pass = false;
      detail = "delta_p(scale 0) not exactly zero";
    }
  SteeringDirection dir = steering_direction(cap, spec, cfg.writer_layer);
  if (collateral_kl(model, dir, cfg.writer_layer, 0.0,
                    reference_unrelated_prompts(cfg, 10)) != 0.0) {
    pass = false;
    detail = "KL(scale 0) not exactly zero";
  }

  // two-token closed forms on an orthonormal linear model
  {
    const std::vector<double> rows = {1.0, 0.0, 0.0, 1.0};
    ModelHandle toy = testing::make_linear_model(
        {"<unk>", "x"}, rows, testing::make_readout(2, 2, rows), 1);
    SteeringDirection delta;
    delta.vector = {0.8, -0.3};
    delta.d_norm = std::sqrt(0.73);
    delta.n_target = delta.n_nontarget = 1;
    const double p1 = 1.0 / (1.0 + std::exp(-1.0));
    const double q1 = 1.0 / (1.0 + std::exp(0.1));
    const double kl_expected =
        p1 * std::log(p1 / q1) + (1.0 - p1) * std::log((1.0 - p1) / (1.0 - q1));
    const double kl = collateral_kl(toy, delta, 0, 1.0, {"x"});
    if (std::fabs(kl - kl_expected) > 1e-9) {
      pass = false;
      detail = "two-token KL closed form";
    }

    // softmax probability shift for the same logit change
    SteeringSpec toy_spec;
    toy_spec.family_id = "toy";
    toy_spec.target_token = "a0";
    toy_spec.target_token_id = 0;
    toy_spec.target_items = {0};
    toy_spec.nontarget_items = {1};
    std::vector<std::vector<std::vector<float>>> states = {
        {{2.0f, 0.0f}, {0.0f, 1.0f}}};
    ActivationCapture toy_cap =
        testing::make_capture(toy, "toy", states, {0, 1});
    SteeringResult r = measure_delta_p(toy, toy_cap, toy_spec, 0, 1.0);
    // direction = (2,0) - (0,1) = (2,-1); steered non-target state (2,0)
    const double base_p = std::exp(0.0) / (std::exp(0.0) + std::exp(1.0));
    const double steer_p = std::exp(2.0) / (std::exp(2.0) + std::exp(0.0));
    if (std::fabs(r.delta_p - (steer_p - base_p)) > 1e-9) {
      pass = false;
      detail = "two-token softmax delta_p closed form";
    }

    SteeringDirection axis;
    axis.vector = {1.0, 0.0};
    axis.d_norm = 1.0;
    if (cd_projection(toy, axis, 0).target_rank != 1) {
      pass = false;
      detail = "orthonormal projection rank";
    }
  }
  report(6, "steering math: exact zeros and closed forms within 1e-9", pass, detail);
}

// ---- criterion 7: clustering -------------------------------------------------------

void criterion_clustering() {
  bool pass = true;
  std::string detail;
  Rng rng(derive_seed(83, "acceptance-clouds"));
  std::vector<std::vector<double>> clouds;
  for (int i = 0; i < 15; ++i)
    clouds.push_back({6.0 + 0.1 * rng.gaussian(), 0.1 * rng.gaussian()});
  for (int i = 0; i < 15; ++i)
    clouds.push_back({-6.0 + 0.1 * rng.gaussian(), 0.1 * rng.gaussian()});
  KMeansResult two = kmeans(clouds, 2, 10, 0);
  const double sil = mean_silhouette(clouds, two.assignment, 2);
  if (sil <= 0.9) {
    pass = false;
    detail = "separated clouds silhouette " + std::to_string(sil);
  }
  bool split_ok = true;
  for (int i = 1; i < 15; ++i)
    if (two.assignment[std::size_t(i)] != two.assignment[0]) split_ok = false;
  if (two.assignment[15] == two.assignment[0]) split_ok = false;
  if (!split_ok) {
    pass = false;
    detail = "clouds not recovered";
  }

  // exhaustive-partition objective oracle on 8 points
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({rng.gaussian(), rng.gaussian()});
  double best = 1e300;
  for (int mask = 1; mask < 255; ++mask) {
    double sum[2][2] = {{0, 0}, {0, 0}};
    int count[2] = {0, 0};
    for (int i = 0; i < 8; ++i) {
      const int c = (mask >> i) & 1;
      sum[c][0] += pts[std::size_t(i)][0];
      sum[c][1] += pts[std::size_t(i)][1];
      count[c]++;
    }
    double wcss = 0.0;
    for (int i = 0; i < 8; ++i) {
      const int c = (mask >> i) & 1;
      const double cx = sum[c][0] / count[c], cy = sum[c][1] / count[c];
      wcss += (pts[std::size_t(i)][0] - cx) * (pts[std::size_t(i)][0] - cx) +
              (pts[std::size_t(i)][1] - cy) * (pts[std::size_t(i)][1] - cy);
    }
    best = std::min(best, wcss);
  }
  KMeansResult km = kmeans(pts, 2, 10, 0);
  if (std::fabs(km.objective - best) > 1e-9) {
    pass = false;
    detail = "kmeans objective vs exhaustive partitions";
  }
  KMeansResult again = kmeans(pts, 2, 10, 0);
  if (again.assignment != km.assignment) {
    pass = false;
    detail = "kmeans not deterministic";
  }
  report(7, "clustering: silhouette, exhaustive-partition objective, determinism",
         pass, detail);
}

// ---- criterion 8: pure-function replays --------------------------------------------

struct FixtureSeries {
  std::vector<double> lin, mlp;
};

std::map<std::string, FixtureSeries> load_fixture(bool& ok) {
  std::map<std::string, FixtureSeries> out;
  const std::string path = default_data_dir() + "/fixtures/emergence_26layer.csv";
  std::ifstream in(path);
  if (!in) {
    ok = false;
    return out;
  }
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  std::stringstream hs(header);
  std::string cell;
  while (std::getline(hs, cell, ',')) cols.push_back(cell);
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    for (std::size_t c = 1; c < cols.size(); ++c) {
      const std::string& name = cols[c];
      if (name.size() > 4 && name.substr(name.size() - 4) == "alin")
        out[name.substr(0, name.size() - 4)].lin.push_back(row[c]);
      else if (name.size() > 4 && name.substr(name.size() - 4) == "amlp")
        out[name.substr(0, name.size() - 4)].mlp.push_back(row[c]);
    }
  }
  ok = true;
  return out;
}

void criterion_replays() {
  bool pass = true;
  std::string detail;
  bool loaded = false;
  std::map<std::string, FixtureSeries> fixture = load_fixture(loaded);
  if (!loaded || fixture.size() != 5) {
    report(8, "pure-function replays", false, "fixture missing");
    return;
  }

  struct Expected {
    const char* family;
    int mlp_layer, lin_layer, gap;
    int pct;  // -1: co-emerge
  };
  const Expected table[] = {
      {"sequence", 1, 19, 18, 69},
      {"geography", 7, 22, 15, 58},
      {"arithmetic", 11, 21, 10, 38},
      {"wordtransform", 19, 18, -1, -1},
      {"analogy", 20, 17, -3, -1},
  };
  for (const auto& e : table) {
    const FixtureSeries& s = fixture.at(e.family);
    CrystallizationGap gap = crystallization_gap_series(s.mlp, s.lin);
    if (!gap.mlp_layer || *gap.mlp_layer != e.mlp_layer || !gap.lin_layer ||
        *gap.lin_layer != e.lin_layer || !gap.gap_layers ||
        *gap.gap_layers != e.gap) {
      pass = false;
      detail = std::string("crystallization row for ") + e.family;
    }
    if (e.pct >= 0) {
      if (!gap.gap_fraction ||
          int(std::lround(*gap.gap_fraction * 100.0)) != e.pct || gap.co_emerge) {
        pass = false;
        detail = std::string("gap fraction for ") + e.family;
      }
    } else if (!gap.co_emerge) {
      pass = false;
      detail = std::string("co-emerge flag for ") + e.family;
    }
  }

  // layer recommendation on the published arithmetic lens series
  LapProfile arith;
  for (std::size_t l = 0; l < fixture.at("arithmetic").lin.size(); ++l) {
    LayerMetrics m;
    m.layer = int(l);
    m.a_lin = fixture.at("arithmetic").lin[l];
    arith.layers.push_back(m);
  }
  if (recommend_layer(arith, LayerPolicy::lap) != 23) {
    pass = false;
    detail = "arithmetic recommendation is not L23";
  }

  auto verdict_for = [](double peak) {
    LapProfile p;
    LayerMetrics m;
    m.layer = 0;
    m.a_lin = peak;
    p.layers.push_back(m);
    p.peak_a_lin = peak;
    return go_no_go(p);
  };
  if (verdict_for(0.02) != Verdict::no_go || verdict_for(0.07) != Verdict::uncertain ||
      verdict_for(0.68) != Verdict::go) {
    pass = false;
    detail = "go/no-go thresholds";
  }
  report(8, "pure-function replays of the published tables", pass, detail);
}

}  // namespace

int main() {
  try {
    criterion_readout_identity();
    criterion_three_regimes();
    criterion_probe_identity();
    criterion_lambda_oracle();
    criterion_statistics();
    criterion_steering_math();
    criterion_clustering();
    criterion_replays();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
