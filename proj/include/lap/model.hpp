#pragma once
// Uniform access to a causal LM with a shared residual stream: capture of
// per-layer states at the readout position, logit readout from any
// intermediate state, resumed forward with modified states, and greedy
// generation with a residual injection.
//
// Layer index convention: layer l in [0, L) is the residual state *after*
// block l; -1 addresses the raw embedding.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lap/concepts.hpp"
#include "lap/tokenizer.hpp"

namespace lap {

enum class NormKind { identity, rmsnorm, layernorm };

// The model's own final normalization, including learned gain/bias.
struct FinalNorm {
  NormKind kind = NormKind::identity;
  std::vector<double> gain;   // empty means all-ones
  std::vector<double> bias;   // layernorm only; empty means zeros
  double eps = 1e-6;

  void apply_f64(std::span<const double> h, std::span<double> out) const;
  // True when the map preserves directions up to a positive scale, which
  // makes projection ranks invariant under rescaling of the input.
  bool scale_equivariant() const;
};

// Optional per-layer affine translator plugged in front of the readout
// (identity when absent). Training one is out of scope; this is the hook.
struct AffineTranslator {
  int num_layers = 0;
  int dim = 0;
  std::vector<double> weight;  // [L][d][d] row-major
  std::vector<double> bias;    // [L][d]

  void apply(int layer, std::span<const double> h, std::span<double> out) const;
};

struct ReadoutSpec {
  int vocab = 0;
  int dim = 0;
  FinalNorm norm;
  std::vector<float> unembedding_f32;   // [V][d] row-major
  std::vector<double> unembedding_f64;  // same weights, double
  // Optional strictly monotone per-coordinate post-transform
  // (cap * tanh(x / cap)), argmax-preserving by construction.
  std::optional<double> softcap;
  std::shared_ptr<const AffineTranslator> translator;
};

// logits = softcap(W_U . norm(translator_l(h)))
std::vector<float> readout_f32(const ReadoutSpec& spec, std::span<const float> state,
                               int layer);
std::vector<double> readout_f64(const ReadoutSpec& spec, std::span<const double> state,
                                int layer);
// Projection used for direction analysis: norm + unembedding only, no
// post-transform and no translator.
std::vector<double> project_direction_f64(const ReadoutSpec& spec,
                                          std::span<const double> direction);

class Backend {
 public:
  virtual ~Backend() = default;

  virtual const std::string& model_id() const = 0;
  virtual std::string backend_version() const = 0;
  virtual int num_layers() const = 0;
  virtual int hidden_dim() const = 0;
  virtual int vocab_size() const = 0;
  virtual int max_context() const = 0;
  virtual const Tokenizer& tokenizer() const = 0;
  virtual const ReadoutSpec& readout() const = 0;

  // Residual states after every block at the last position of `tokens`,
  // written to out[L][d] (row-major, f32).
  virtual void forward_states(std::span<const int> tokens, float* out) const = 0;

  // Continue the computation from `state` at `layer` through the remaining
  // blocks; returns the final residual state. Double precision end to end so
  // perturbation quotients are not dominated by storage rounding.
  virtual std::vector<double> resume_state_f64(int layer,
                                               std::span<const double> state) const = 0;
};

class ModelHandle {
 public:
  ModelHandle() = default;
  explicit ModelHandle(std::shared_ptr<const Backend> backend)
      : backend_(std::move(backend)) {}

  const Backend& backend() const;
  const std::string& model_id() const { return backend().model_id(); }
  int num_layers() const { return backend().num_layers(); }
  int hidden_dim() const { return backend().hidden_dim(); }
  int vocab_size() const { return backend().vocab_size(); }
  const Tokenizer& tokenizer() const { return backend().tokenizer(); }
  const ReadoutSpec& readout() const { return backend().readout(); }
  bool valid() const { return backend_ != nullptr; }

 private:
  std::shared_ptr<const Backend> backend_;
};

struct CaptureError {
  int prompt_index = -1;  // index into the input prompt list
  std::string reason;
};

struct CaptureManifest {
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string backend_version;
  int batch_size = 0;
};

// Immutable per-layer residual states at the last prompt-token position.
// states[layer] is a [N][d] row-major block; downstream code treats the
// whole structure as read-only.
struct ActivationCapture {
  std::string model_id;
  std::string family_id;
  std::string position_policy = "last_prompt_token";
  int num_layers = 0;
  int hidden_dim = 0;
  std::vector<PromptItem> items;            // successfully captured prompts
  std::vector<std::vector<float>> states;   // [L][N*d]
  std::vector<int> answer_token_ids;        // per captured prompt
  std::vector<int> model_top1;              // per captured prompt
  CaptureManifest manifest;
  std::vector<CaptureError> errors;

  int num_prompts() const { return int(items.size()); }
  std::span<const float> state(int layer, int prompt) const;
  std::uint64_t content_key() const;  // identifies (model, family, N, L, d)
};

struct CaptureOptions {
  int batch_size = 8;    // grouping only; results are batch-invariant
  std::uint64_t seed = 0;
};

// One state per (layer, prompt) at the last prompt-token position.
// Prompts that fail to tokenize or exceed the context window produce
// per-prompt error entries; the capture continues.
ActivationCapture capture_activations(const ModelHandle& model,
                                      const std::vector<PromptItem>& prompts,
                                      const std::string& family_id,
                                      const CaptureOptions& options = {});

// readout of an arbitrary state through the model's head.
std::vector<float> readout_logits(const ModelHandle& model,
                                  std::span<const float> state, int layer);

// Resume the forward pass from per-prompt states at `layer`; one logit
// vector per prompt. With unmodified captured states this reproduces the
// full forward output.
std::vector<std::vector<float>> forward_from_layer(
    const ModelHandle& model, int layer,
    const std::vector<std::vector<float>>& modified_states);

// Double-precision resume to final logits for a single state.
std::vector<double> resume_logits_f64(const ModelHandle& model, int layer,
                                      std::span<const double> state);

// Greedy decoding with scale*direction added to the residual stream at
// `layer` at every position of every step.
std::string generate_with_injection(const ModelHandle& model,
                                    const std::string& prompt, int layer,
                                    std::span<const float> direction,
                                    double scale, int max_tokens);

// ---- activation cache -------------------------------------------------------

// Directory layout: manifest.json plus one row-major little-endian f32
// array file per layer (layer_XX.bin).
void save_capture(const ActivationCapture& capture, const std::string& dir);
ActivationCapture load_capture(const std::string& dir);

// Cache root resolution: explicit argument > LAP_CACHE_DIR > empty (disabled).
std::string cache_root(const std::string& explicit_dir = "");

}  // namespace lap
