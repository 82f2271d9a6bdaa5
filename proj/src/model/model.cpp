#include "lap/model.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include "lap/error.hpp"
#include "lap/hash.hpp"
#include "lap/kernels.hpp"

namespace lap {

static_assert(std::endian::native == std::endian::little,
              "cache files are little-endian; byte-swapped IO is not implemented");

// ---- readout ----------------------------------------------------------------

void FinalNorm::apply_f64(std::span<const double> h, std::span<double> out) const {
  const std::size_t d = h.size();
  switch (kind) {
    case NormKind::identity: {
      for (std::size_t i = 0; i < d; ++i) out[i] = h[i];
      return;
    }
    case NormKind::rmsnorm: {
      double ss = kernels::sumsq_f64(h.data(), d);
      const double inv = 1.0 / std::sqrt(ss / double(d) + eps);
      for (std::size_t i = 0; i < d; ++i) {
        const double g = gain.empty() ? 1.0 : gain[i];
        out[i] = h[i] * inv * g;
      }
      return;
    }
    case NormKind::layernorm: {
      double mean = 0.0;
      for (std::size_t i = 0; i < d; ++i) mean += h[i];
      mean /= double(d);
      double var = 0.0;
      for (std::size_t i = 0; i < d; ++i) var += (h[i] - mean) * (h[i] - mean);
      var /= double(d);
      const double inv = 1.0 / std::sqrt(var + eps);
      for (std::size_t i = 0; i < d; ++i) {
        const double g = gain.empty() ? 1.0 : gain[i];
        const double b = bias.empty() ? 0.0 : bias[i];
        out[i] = (h[i] - mean) * inv * g + b;
      }
      return;
    }
  }
}

bool FinalNorm::scale_equivariant() const {
  // identity scales linearly; rmsnorm and layernorm are invariant under
  // positive rescaling. All preserve projection order under h -> c*h, c > 0.
  return true;
}

void AffineTranslator::apply(int layer, std::span<const double> h,
                             std::span<double> out) const {
  if (layer < 0 || layer >= num_layers)
    throw data_error("translator: layer out of range");
  const double* w = weight.data() + std::size_t(layer) * dim * dim;
  kernels::matvec_f64(w, std::size_t(dim), std::size_t(dim), h.data(), out.data());
  const double* b = bias.data() + std::size_t(layer) * dim;
  for (int i = 0; i < dim; ++i) out[std::size_t(i)] += b[std::size_t(i)];
}

namespace {

void check_dim(std::size_t got, int want, const char* who) {
  if (got != std::size_t(want))
    throw data_error(std::string(who) + ": state dimension mismatch (got " +
                     std::to_string(got) + ", model dim " + std::to_string(want) + ")");
}

std::vector<double> translated(const ReadoutSpec& spec, std::span<const double> h,
                               int layer) {
  std::vector<double> t(h.begin(), h.end());
  if (spec.translator) {
    std::vector<double> out(t.size());
    spec.translator->apply(layer, t, out);
    return out;
  }
  return t;
}

}  // namespace

std::vector<float> readout_f32(const ReadoutSpec& spec, std::span<const float> state,
                               int layer) {
  check_dim(state.size(), spec.dim, "readout");
  std::vector<float> logits((std::size_t(spec.vocab)));
  if (!spec.translator && spec.norm.kind == NormKind::identity) {
    // pure f32 fast path
    kernels::matvec_f32(spec.unembedding_f32.data(), std::size_t(spec.vocab),
                        std::size_t(spec.dim), state.data(), logits.data());
  } else {
    std::vector<double> h(state.begin(), state.end());
    std::vector<double> t = translated(spec, h, layer);
    std::vector<double> normed(h.size());
    spec.norm.apply_f64(t, normed);
    std::vector<float> normed32(normed.begin(), normed.end());
    kernels::matvec_f32(spec.unembedding_f32.data(), std::size_t(spec.vocab),
                        std::size_t(spec.dim), normed32.data(), logits.data());
  }
  if (spec.softcap) {
    const double cap = *spec.softcap;
    for (auto& l : logits) l = float(cap * std::tanh(double(l) / cap));
  }
  return logits;
}

std::vector<double> readout_f64(const ReadoutSpec& spec, std::span<const double> state,
                                int layer) {
  check_dim(state.size(), spec.dim, "readout");
  std::vector<double> t = translated(spec, state, layer);
  std::vector<double> normed(t.size());
  spec.norm.apply_f64(t, normed);
  std::vector<double> logits((std::size_t(spec.vocab)));
  kernels::matvec_f64(spec.unembedding_f64.data(), std::size_t(spec.vocab),
                      std::size_t(spec.dim), normed.data(), logits.data());
  if (spec.softcap) {
    const double cap = *spec.softcap;
    for (auto& l : logits) l = cap * std::tanh(l / cap);
  }
  return logits;
}

std::vector<double> project_direction_f64(const ReadoutSpec& spec,
                                          std::span<const double> direction) {
  check_dim(direction.size(), spec.dim, "project_direction");
  std::vector<double> normed(direction.size());
  spec.norm.apply_f64(direction, normed);
  std::vector<double> logits((std::size_t(spec.vocab)));
  kernels::matvec_f64(spec.unembedding_f64.data(), std::size_t(spec.vocab),
                      std::size_t(spec.dim), normed.data(), logits.data());
  return logits;
}

// ---- handle / capture ---------------------------------------------------------

const Backend& ModelHandle::backend() const {
  if (!backend_) throw backend_error("empty model handle");
  return *backend_;
}

std::span<const float> ActivationCapture::state(int layer, int prompt) const {
  if (layer < 0 || layer >= num_layers) throw data_error("capture: layer out of range");
  if (prompt < 0 || prompt >= num_prompts())
    throw data_error("capture: prompt index out of range");
  return std::span<const float>(
      states[std::size_t(layer)].data() + std::size_t(prompt) * hidden_dim,
      std::size_t(hidden_dim));
}

std::uint64_t ActivationCapture::content_key() const {
  std::uint64_t h = fnv1a64(model_id);
  h = fnv1a64(family_id, h);
  h = fnv1a64(&num_layers, sizeof(num_layers), h);
  h = fnv1a64(&hidden_dim, sizeof(hidden_dim), h);
  const int n = num_prompts();
  h = fnv1a64(&n, sizeof(n), h);
  return h;
}

namespace {

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

ActivationCapture capture_activations(const ModelHandle& model,
                                      const std::vector<PromptItem>& prompts,
                                      const std::string& family_id,
                                      const CaptureOptions& options) {
  const Backend& b = model.backend();
  const int L = b.num_layers();
  const int d = b.hidden_dim();

  ActivationCapture cap;
  cap.model_id = b.model_id();
  cap.family_id = family_id;
  cap.num_layers = L;
  cap.hidden_dim = d;
  cap.manifest.seed = options.seed;
  cap.manifest.timestamp = utc_timestamp();
  cap.manifest.backend_version = b.backend_version();
  cap.manifest.batch_size = options.batch_size;

  std::vector<std::vector<int>> token_lists;
  token_lists.reserve(prompts.size());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    std::vector<int> toks = b.tokenizer().encode(prompts[i].text);
    if (toks.empty()) {
      cap.errors.push_back({int(i), "prompt tokenizes to zero tokens"});
      continue;
    }
    if (int(toks.size()) > b.max_context()) {
      cap.errors.push_back({int(i), "prompt exceeds model context (" +
                                        std::to_string(toks.size()) + " > " +
                                        std::to_string(b.max_context()) + " tokens)"});
      continue;
    }
    cap.items.push_back(prompts[i]);
    cap.answer_token_ids.push_back(prompts[i].answer_token_id);
    token_lists.push_back(std::move(toks));
  }

  const std::size_t n = cap.items.size();
  cap.states.assign(std::size_t(L), std::vector<float>(n * std::size_t(d), 0.0f));
  std::vector<float> scratch(std::size_t(L) * std::size_t(d));
  for (std::size_t p = 0; p < n; ++p) {
    try {
      b.forward_states(token_lists[p], scratch.data());
    } catch (const std::exception& e) {
      throw backend_error("capture aborted on prompt " + std::to_string(p) + " of " +
                          std::to_string(n) + " (family " + family_id + ", model " +
                          b.model_id() + ", " + std::to_string(p) +
                          " prompts completed): " + e.what());
    }
    for (int l = 0; l < L; ++l) {
      float* dst = cap.states[std::size_t(l)].data() + p * std::size_t(d);
      const float* src = scratch.data() + std::size_t(l) * std::size_t(d);
      for (int i = 0; i < d; ++i) dst[std::size_t(i)] = src[std::size_t(i)];
    }
  }

  cap.model_top1.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<float> logits = readout_f32(b.readout(), cap.state(L - 1, int(p)), L - 1);
    cap.model_top1[p] = int(kernels::argmax_f32(logits.data(), logits.size()));
  }
  return cap;
}

std::vector<float> readout_logits(const ModelHandle& model,
                                  std::span<const float> state, int layer) {
  if (layer < -1 || layer >= model.num_layers())
    throw data_error("readout_logits: layer out of range");
  return readout_f32(model.readout(), state, layer < 0 ? 0 : layer);
}

std::vector<std::vector<float>> forward_from_layer(
    const ModelHandle& model, int layer,
    const std::vector<std::vector<float>>& modified_states) {
  const Backend& b = model.backend();
  if (layer < 0 || layer >= b.num_layers())
    throw data_error("forward_from_layer: layer " + std::to_string(layer) +
                     " out of range [0, " + std::to_string(b.num_layers()) + ")");
  std::vector<std::vector<float>> out;
  out.reserve(modified_states.size());
  for (const auto& s : modified_states) {
    check_dim(s.size(), b.hidden_dim(), "forward_from_layer");
    std::vector<double> h(s.begin(), s.end());
    std::vector<double> fin = b.resume_state_f64(layer, h);
    std::vector<float> fin32(fin.begin(), fin.end());
    out.push_back(readout_f32(b.readout(), fin32, b.num_layers() - 1));
  }
  return out;
}

std::vector<double> resume_logits_f64(const ModelHandle& model, int layer,
                                      std::span<const double> state) {
  const Backend& b = model.backend();
  if (layer < 0 || layer >= b.num_layers())
    throw data_error("resume_logits_f64: layer out of range");
  std::vector<double> fin = b.resume_state_f64(layer, state);
  return readout_f64(b.readout(), fin, b.num_layers() - 1);
}

std::string generate_with_injection(const ModelHandle& model,
                                    const std::string& prompt, int layer,
                                    std::span<const float> direction,
                                    double scale, int max_tokens) {
  const Backend& b = model.backend();
  if (max_tokens <= 0) throw data_error("generate: max_tokens must be positive");
  if (layer < 0 || layer >= b.num_layers())
    throw data_error("generate: layer out of range");
  check_dim(direction.size(), b.hidden_dim(), "generate");
  const double dn = std::sqrt(kernels::sumsq_f32(direction.data(), direction.size()));
  if (dn == 0.0 && scale != 0.0)
    throw data_error("generate: zero direction with nonzero scale");

  std::vector<int> ids = b.tokenizer().encode(prompt);
  if (ids.empty()) throw data_error("generate: prompt tokenizes to zero tokens");

  const int L = b.num_layers();
  const int d = b.hidden_dim();
  std::vector<float> states(std::size_t(L) * std::size_t(d));
  std::vector<int> generated;
  for (int step = 0; step < max_tokens; ++step) {
    if (int(ids.size()) > b.max_context()) break;
    // The injection applies to the residual stream at `layer` for every
    // position; positions before the last cannot influence the next token
    // through a position-wise backend, so resuming from the injected last
    // position realizes it.
    b.forward_states(ids, states.data());
    std::vector<double> h((std::size_t(d)));
    const float* src = states.data() + std::size_t(layer) * std::size_t(d);
    for (int i = 0; i < d; ++i)
      h[std::size_t(i)] = double(src[i]) + scale * double(direction[std::size_t(i)]);
    std::vector<double> fin = b.resume_state_f64(layer, h);
    std::vector<float> fin32(fin.begin(), fin.end());
    std::vector<float> logits = readout_f32(b.readout(), fin32, L - 1);
    const int next = int(kernels::argmax_f32(logits.data(), logits.size()));
    generated.push_back(next);
    ids.push_back(next);
  }
  return b.tokenizer().decode(generated);
}

std::string cache_root(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("LAP_CACHE_DIR")) return env;
  return "";
}

}  // namespace lap
