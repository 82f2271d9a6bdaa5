#include "lap/reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/rng.hpp"

namespace lap {

namespace {

const char* kAnswerWords[6] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
constexpr int kExtraAnswerWords = 3;  // non-planted answer tokens for control families

// Orthonormal rows via modified Gram-Schmidt with one re-orthogonalization
// pass; deterministic given the stream.
std::vector<std::vector<double>> orthonormal_rows(Rng& rng, int n, int dim) {
  std::vector<std::vector<double>> rows;
  rows.reserve(std::size_t(n));
  while (int(rows.size()) < n) {
    std::vector<double> v = rng.gaussian_vector(std::size_t(dim));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : rows) {
        const double proj = kernels::dot_f64(q.data(), v.data(), v.size());
        kernels::axpy_f64(-proj, q.data(), v.data(), v.size());
      }
    }
    const double nrm = std::sqrt(kernels::sumsq_f64(v.data(), v.size()));
    if (nrm < 1e-8) continue;  // resample a degenerate draw
    for (auto& x : v) x /= nrm;
    rows.push_back(std::move(v));
  }
  return rows;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct VocabLayout {
  std::vector<std::string> words;
  int first_answer = 2;
  int first_key = 0;
  int first_digit = 0;
  int first_extra = 0;
  int first_filler = 0;
};

VocabLayout vocab_for_config(const ReferenceModelConfig& c) {
  VocabLayout v;
  v.words.push_back("<unk>");
  v.words.push_back(" ");
  v.first_answer = int(v.words.size());
  for (int i = 0; i < c.num_classes; ++i) v.words.push_back(kAnswerWords[i]);
  v.first_key = int(v.words.size());
  const int nk = c.num_classes * c.keys_per_class;
  for (int j = 0; j < nk; ++j) v.words.push_back("k" + std::to_string(j));
  v.first_digit = int(v.words.size());
  for (int i = 0; i < 10; ++i) v.words.push_back(std::to_string(i));
  v.first_extra = int(v.words.size());
  for (int i = 0; i < kExtraAnswerWords; ++i)
    v.words.push_back(kAnswerWords[c.num_classes + i]);
  v.first_filler = int(v.words.size());
  int idx = 0;
  while (int(v.words.size()) < c.vocab_size)
    v.words.push_back("f" + std::to_string(idx++));
  return v;
}

int num_fillers(const ReferenceModelConfig& c) {
  return c.vocab_size - vocab_for_config(c).first_filler;
}

std::vector<std::string> checked_vocab(const ReferenceModelConfig& c) {
  c.validate();
  return vocab_for_config(c).words;
}

}  // namespace

void ReferenceModelConfig::validate() const {
  if (num_layers < 1) throw data_error("reference config: num_layers must be >= 1");
  if (hidden_dim < 1) throw data_error("reference config: hidden_dim must be >= 1");
  if (writer_layer < 0 || writer_layer >= num_layers)
    throw data_error("reference config: writer_layer must satisfy 0 <= w < L");
  if (write_scale <= 0.0) throw data_error("reference config: write_scale must be > 0");
  if (num_classes < 2 || num_classes > 3)
    throw data_error("reference config: num_classes must be 2 or 3");
  if (keys_per_class < 2)
    throw data_error("reference config: keys_per_class must be >= 2");
  if (gate_threshold <= 0.0 || gate_threshold > 1.0)
    throw data_error("reference config: gate_threshold must be in (0, 1]");
  const int nk = num_classes * keys_per_class;
  // answer axes + key axes + hidden plant axes + at least one generic axis
  if (2 * num_classes + nk + 1 > hidden_dim)
    throw data_error("reference config: hidden_dim too small for " +
                     std::to_string(num_classes) + " classes x " +
                     std::to_string(keys_per_class) + " keys");
  const int min_vocab = 2 + num_classes + nk + 10 + kExtraAnswerWords + 8;
  if (vocab_size < min_vocab)
    throw data_error("reference config: vocab_size must be >= " +
                     std::to_string(min_vocab));
  if (max_context < 4) throw data_error("reference config: max_context too small");
}

std::string ReferenceModelConfig::to_model_id() const {
  std::string s = "ref:";
  s += "V=" + std::to_string(vocab_size);
  s += ";d=" + std::to_string(hidden_dim);
  s += ";L=" + std::to_string(num_layers);
  s += ";w=" + std::to_string(writer_layer);
  s += ";beta=" + fmt_num(write_scale);
  s += ";nl=" + std::to_string(nonlinear_plant ? 1 : 0);
  s += ";seed=" + std::to_string(seed);
  s += ";classes=" + std::to_string(num_classes);
  s += ";kpc=" + std::to_string(keys_per_class);
  s += ";gate=" + fmt_num(gate_threshold);
  s += ";ctx=" + std::to_string(max_context);
  return s;
}

bool is_reference_id(const std::string& model_id) {
  return model_id.rfind("ref:", 0) == 0 || model_id == "ref";
}

ReferenceModelConfig parse_reference_id(const std::string& model_id) {
  if (!is_reference_id(model_id))
    throw backend_error("not a reference model id: " + model_id);
  ReferenceModelConfig c;
  if (model_id == "ref" || model_id == "ref:") return c;
  std::string body = model_id.substr(4);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t sep = body.find_first_of(";,", pos);
    if (sep == std::string::npos) sep = body.size();
    std::string kv = body.substr(pos, sep - pos);
    pos = sep + 1;
    if (kv.empty()) continue;
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw backend_error("bad reference id field '" + kv + "' in " + model_id);
    const std::string k = kv.substr(0, eq);
    const std::string v = kv.substr(eq + 1);
    try {
      if (k == "V") c.vocab_size = std::stoi(v);
      else if (k == "d") c.hidden_dim = std::stoi(v);
      else if (k == "L") c.num_layers = std::stoi(v);
      else if (k == "w") c.writer_layer = std::stoi(v);
      else if (k == "beta") c.write_scale = std::stod(v);
      else if (k == "nl") c.nonlinear_plant = std::stoi(v) != 0;
      else if (k == "seed") c.seed = std::stoull(v);
      else if (k == "classes") c.num_classes = std::stoi(v);
      else if (k == "kpc") c.keys_per_class = std::stoi(v);
      else if (k == "gate") c.gate_threshold = std::stod(v);
      else if (k == "ctx") c.max_context = std::stoi(v);
      else throw backend_error("unknown reference id key '" + k + "' in " + model_id);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw backend_error("bad value for '" + k + "' in " + model_id);
    }
  }
  return c;
}

// ---- backend ------------------------------------------------------------------

ReferenceBackend::ReferenceBackend(const ReferenceModelConfig& config)
    : config_(config),
      model_id_(config.to_model_id()),
      tokenizer_(checked_vocab(config)) {
  vocab_ = vocab_for_config(config_).words;
  build();
  self_check();
}

std::string ReferenceBackend::backend_version() const { return "ref-1"; }

void ReferenceBackend::build() {
  const int d = config_.hidden_dim;
  const int V = config_.vocab_size;
  const int na = config_.num_classes;
  const int nk = na * config_.keys_per_class;
  const VocabLayout layout = vocab_for_config(config_);

  Rng basis_rng(derive_seed(config_.seed, "ref-basis"));
  std::vector<std::vector<double>> axes = orthonormal_rows(basis_rng, d, d);
  // axis budget: [0, na) answers, [na, na+nk) keys, [na+nk, na+nk+na) hidden
  // plants, the rest generic
  const int first_hidden = na + nk;
  const int first_generic = first_hidden + na;
  const int n_generic = d - first_generic;

  embeddings_.assign(std::size_t(V) * std::size_t(d), 0.0);
  auto set_row = [&](int token, const std::vector<double>& vec) {
    double* row = embeddings_.data() + std::size_t(token) * std::size_t(d);
    for (int i = 0; i < d; ++i) row[std::size_t(i)] = vec[std::size_t(i)];
  };

  answer_tokens_.clear();
  for (int i = 0; i < na; ++i) {
    answer_tokens_.push_back(layout.first_answer + i);
    set_row(layout.first_answer + i, axes[std::size_t(i)]);
  }
  key_tokens_.clear();
  key_axes_.clear();
  for (int j = 0; j < nk; ++j) {
    key_tokens_.push_back(layout.first_key + j);
    key_axes_.push_back(axes[std::size_t(na + j)]);
    set_row(layout.first_key + j, axes[std::size_t(na + j)]);
  }
  // every other token: unit vector in the generic subspace
  for (int v = 0; v < V; ++v) {
    const bool special = (v >= layout.first_answer && v < layout.first_key + nk);
    if (special) continue;
    Rng row_rng(derive_seed(config_.seed, "ref-vocab", std::uint64_t(v)));
    std::vector<double> coeff = row_rng.gaussian_vector(std::size_t(n_generic));
    double ss = 0.0;
    for (double c : coeff) ss += c * c;
    const double inv = ss > 0 ? 1.0 / std::sqrt(ss) : 0.0;
    std::vector<double> row(std::size_t(d), 0.0);
    for (int g = 0; g < n_generic; ++g) {
      const double c = coeff[std::size_t(g)] * inv;
      kernels::axpy_f64(c, axes[std::size_t(first_generic + g)].data(), row.data(),
                        std::size_t(d));
    }
    set_row(v, row);
  }

  // plants: answer row (linear) or hidden axis (nonlinear), per key slot
  plants_.clear();
  for (int j = 0; j < nk; ++j) {
    const int cls = j / config_.keys_per_class;
    plants_.push_back(config_.nonlinear_plant ? axes[std::size_t(first_hidden + cls)]
                                              : axes[std::size_t(cls)]);
  }

  // rotation blocks for layers after the writer: rotate the subspace
  // orthogonal to the answer axes, leave answer components fixed
  rotations_.assign(std::size_t(config_.num_layers), {});
  const int C = d - na;
  for (int l = config_.writer_layer + 1; l < config_.num_layers; ++l) {
    Rng rot_rng(derive_seed(config_.seed, "ref-rot", std::uint64_t(l)));
    std::vector<std::vector<double>> g = orthonormal_rows(rot_rng, C, C);
    // delta = Bc^T (G - I) Bc with Bc rows = non-answer axes
    std::vector<double> m(std::size_t(d) * std::size_t(d), 0.0);
    for (int r = 0; r < C; ++r) {
      // row r of (G - I) in complement coordinates
      for (int c = 0; c < C; ++c) {
        const double val = g[std::size_t(r)][std::size_t(c)] - (r == c ? 1.0 : 0.0);
        if (val == 0.0) continue;
        // accumulate outer product axes[na+r] (x) axes[na+c]
        const auto& br = axes[std::size_t(na + r)];
        const auto& bc = axes[std::size_t(na + c)];
        for (int i = 0; i < d; ++i) {
          double* mrow = m.data() + std::size_t(i) * std::size_t(d);
          kernels::axpy_f64(val * br[std::size_t(i)], bc.data(), mrow, std::size_t(d));
        }
      }
    }
    rotations_[std::size_t(l)] = std::move(m);
  }

  // readout: identity norm, unembedding tied to the embeddings
  readout_.vocab = V;
  readout_.dim = d;
  readout_.norm.kind = NormKind::identity;
  readout_.unembedding_f64 = embeddings_;
  readout_.unembedding_f32.assign(embeddings_.begin(), embeddings_.end());
}

std::vector<double> ReferenceBackend::embedding(int token) const {
  if (token < 0 || token >= config_.vocab_size)
    throw data_error("reference: token out of range");
  const double* row = embeddings_.data() +
                      std::size_t(token) * std::size_t(config_.hidden_dim);
  return std::vector<double>(row, row + config_.hidden_dim);
}

std::vector<double> ReferenceBackend::block_delta(int layer,
                                                  std::span<const double> h) const {
  const int d = config_.hidden_dim;
  std::vector<double> out(std::size_t(d), 0.0);
  if (layer < config_.writer_layer) return out;
  if (layer == config_.writer_layer) {
    for (std::size_t j = 0; j < key_axes_.size(); ++j) {
      const double a = kernels::dot_f64(key_axes_[j].data(), h.data(), h.size());
      if (a >= config_.gate_threshold)
        kernels::axpy_f64(config_.write_scale, plants_[j].data(), out.data(),
                          std::size_t(d));
    }
    return out;
  }
  kernels::matvec_f64(rotations_[std::size_t(layer)].data(), std::size_t(d),
                      std::size_t(d), h.data(), out.data());
  return out;
}

void ReferenceBackend::forward_states(std::span<const int> tokens, float* out) const {
  if (tokens.empty()) throw data_error("reference forward: empty token list");
  const int d = config_.hidden_dim;
  std::vector<double> h = embedding(tokens.back());
  for (int l = 0; l < config_.num_layers; ++l) {
    std::vector<double> delta = block_delta(l, h);
    for (int i = 0; i < d; ++i) h[std::size_t(i)] += delta[std::size_t(i)];
    float* dst = out + std::size_t(l) * std::size_t(d);
    for (int i = 0; i < d; ++i) dst[std::size_t(i)] = float(h[std::size_t(i)]);
  }
}

std::vector<double> ReferenceBackend::resume_state_f64(
    int layer, std::span<const double> state) const {
  if (layer < -1 || layer >= config_.num_layers)
    throw data_error("reference resume: layer out of range");
  if (int(state.size()) != config_.hidden_dim)
    throw data_error("reference resume: state dimension mismatch");
  std::vector<double> h(state.begin(), state.end());
  for (int l = layer + 1; l < config_.num_layers; ++l) {
    std::vector<double> delta = block_delta(l, h);
    for (int i = 0; i < config_.hidden_dim; ++i) h[std::size_t(i)] += delta[std::size_t(i)];
  }
  return h;
}

const std::vector<double>& ReferenceBackend::rotation_block(int layer) const {
  if (layer <= config_.writer_layer || layer >= config_.num_layers)
    throw data_error("reference: no rotation block at layer " + std::to_string(layer));
  return rotations_[std::size_t(layer)];
}

std::vector<double> ReferenceBackend::writer_plant(int key_slot) const {
  if (key_slot < 0 || key_slot >= num_key_slots())
    throw data_error("reference: key slot out of range");
  std::vector<double> p = plants_[std::size_t(key_slot)];
  for (auto& x : p) x *= config_.write_scale;
  return p;
}

std::vector<double> ReferenceBackend::key_axis(int key_slot) const {
  if (key_slot < 0 || key_slot >= num_key_slots())
    throw data_error("reference: key slot out of range");
  return key_axes_[std::size_t(key_slot)];
}

int ReferenceBackend::answer_token(int class_index) const {
  if (class_index < 0 || class_index >= config_.num_classes)
    throw data_error("reference: class index out of range");
  return answer_tokens_[std::size_t(class_index)];
}

int ReferenceBackend::key_token(int key_slot) const {
  if (key_slot < 0 || key_slot >= num_key_slots())
    throw data_error("reference: key slot out of range");
  return key_tokens_[std::size_t(key_slot)];
}

std::vector<double> ReferenceBackend::tail_matrix(int layer) const {
  if (layer < config_.writer_layer)
    throw data_error("reference tail_matrix: tail is gated (nonlinear) before the writer");
  if (layer >= config_.num_layers)
    throw data_error("reference tail_matrix: layer out of range");
  const int d = config_.hidden_dim;
  const int V = config_.vocab_size;
  // T = prod over blocks after `layer` of (I + M_l)
  std::vector<double> t(std::size_t(d) * std::size_t(d), 0.0);
  for (int i = 0; i < d; ++i) t[std::size_t(i) * std::size_t(d) + std::size_t(i)] = 1.0;
  for (int l = layer + 1; l < config_.num_layers; ++l) {
    const std::vector<double>& m = rotations_[std::size_t(l)];
    std::vector<double> mt(std::size_t(d) * std::size_t(d), 0.0);
    kernels::gemm_f64(m.data(), std::size_t(d), std::size_t(d), t.data(),
                      std::size_t(d), mt.data(), false);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += mt[i];
  }
  std::vector<double> tail(std::size_t(V) * std::size_t(d), 0.0);
  kernels::gemm_f64(embeddings_.data(), std::size_t(V), std::size_t(d), t.data(),
                    std::size_t(d), tail.data(), false);
  return tail;
}

void ReferenceBackend::self_check() {
  // the planted family must produce the exact step (or all-zero) lens
  // profile; anything else is a construction bug
  ConceptFamily fam = reference_planted_family(config_);
  const int d = config_.hidden_dim;
  const int L = config_.num_layers;
  std::vector<float> states(std::size_t(L) * std::size_t(d));
  for (const PromptItem& item : fam.items) {
    std::vector<int> toks = tokenizer_.encode(item.text);
    if (toks.empty()) throw backend_error("reference self-check: empty encoding");
    forward_states(toks, states.data());
    const int answer = tokenizer_.find(item.answer).value_or(-1);
    if (answer < 0) throw backend_error("reference self-check: answer not in vocab");
    for (int l = 0; l < L; ++l) {
      std::span<const float> st(states.data() + std::size_t(l) * std::size_t(d),
                                std::size_t(d));
      std::vector<float> logits = readout_f32(readout_, st, l);
      const bool hit = int(kernels::argmax_f32(logits.data(), logits.size())) == answer;
      const bool want = !config_.nonlinear_plant && l >= config_.writer_layer;
      if (hit != want)
        throw backend_error("reference self-check failed at layer " + std::to_string(l));
    }
  }
}

ModelHandle build_reference_model(const ReferenceModelConfig& config) {
  config.validate();
  return ModelHandle(std::make_shared<ReferenceBackend>(config));
}

ModelHandle resolve_model(const std::string& model_id) {
  if (is_reference_id(model_id))
    return build_reference_model(parse_reference_id(model_id));
  throw backend_error("no backend for model id '" + model_id +
                      "' (this build resolves ref:... ids only)");
}

const ReferenceBackend& reference_backend(const ModelHandle& model) {
  const auto* ref = dynamic_cast<const ReferenceBackend*>(&model.backend());
  if (!ref) throw backend_error("model is not a reference backend");
  return *ref;
}

// ---- families -------------------------------------------------------------------

ConceptFamily reference_planted_family(const ReferenceModelConfig& config) {
  config.validate();
  const int nf = num_fillers(config);
  const int nk = config.num_classes * config.keys_per_class;
  ConceptFamily fam;
  fam.family_id = config.nonlinear_plant ? "ref-planted-hidden" : "ref-planted";
  fam.kind = config.num_classes == 2 ? FamilyKind::controlled_binary : FamilyKind::custom;
  for (int c = 0; c < config.num_classes; ++c) fam.classes.push_back(kAnswerWords[c]);
  fam.templates = {"<filler> <filler> <key>"};
  for (int j = 0; j < nk; ++j) {
    const int cls = j / config.keys_per_class;
    const std::string key_word = "k" + std::to_string(j);
    for (int v = 0; v < 5; ++v) {
      const int fa = (j * 3 + v) % nf;
      const int fb = (j * 5 + 2 * v + 1) % nf;
      PromptItem item;
      item.text = "f" + std::to_string(fa) + " f" + std::to_string(fb) + " " + key_word;
      item.answer = kAnswerWords[cls];
      item.class_label = kAnswerWords[cls];
      fam.items.push_back(std::move(item));
    }
  }
  return fam;
}

ConceptFamily reference_unplanted_family(const ReferenceModelConfig& config) {
  config.validate();
  const int nf = num_fillers(config);
  ConceptFamily fam;
  fam.family_id = "ref-unplanted";
  fam.kind = FamilyKind::custom;
  for (int c = 0; c < kExtraAnswerWords; ++c)
    fam.classes.push_back(kAnswerWords[config.num_classes + c]);
  fam.templates = {"<filler> <filler>"};
  // each ending token appears once per class, so the last-token state carries
  // no class information at all
  for (int m = 0; m < 4; ++m) {
    for (int c = 0; c < kExtraAnswerWords; ++c) {
      for (int v = 0; v < 2; ++v) {
        const int fa = (4 + c * 2 + v) % nf;
        PromptItem item;
        item.text = "f" + std::to_string(fa) + " f" + std::to_string(m % nf);
        item.answer = kAnswerWords[config.num_classes + c];
        item.class_label = kAnswerWords[config.num_classes + c];
        fam.items.push_back(std::move(item));
      }
    }
  }
  return fam;
}

std::vector<std::string> reference_unrelated_prompts(
    const ReferenceModelConfig& config, int count) {
  config.validate();
  const int nf = num_fillers(config);
  std::vector<std::string> prompts;
  prompts.reserve(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    const int a = (i * 7 + 3) % nf;
    const int b = (i * 11 + 5) % nf;
    prompts.push_back("f" + std::to_string(a) + " f" + std::to_string(b));
  }
  return prompts;
}

}  // namespace lap
