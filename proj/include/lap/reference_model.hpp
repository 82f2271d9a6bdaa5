#pragma once
// Deterministic planted-concept model used as the test oracle.
//
// Construction: a fixed orthonormal basis of R^d is split into answer axes,
// key axes, optional hidden plant axes, and a generic remainder. Token
// embeddings are tied to the unembedding rows. Blocks before the writer are
// zero; the writer block additively plants write_scale times either the
// answer's unembedding row (linear plant) or a hidden axis (nonlinear plant)
// when the state matches a key axis; blocks after the writer rotate the
// subspace orthogonal to the answer rows and leave answer components
// untouched. The final norm is the identity, so the tail from any layer at
// or after the writer is an exactly linear map.

#include <cstdint>
#include <string>
#include <vector>

#include "lap/model.hpp"

namespace lap {

struct ReferenceModelConfig {
  int vocab_size = 64;
  int hidden_dim = 16;
  int num_layers = 4;
  int writer_layer = 2;
  double write_scale = 8.0;
  bool nonlinear_plant = false;
  std::uint64_t seed = 1;
  int num_classes = 2;      // planted answer tokens
  int keys_per_class = 4;
  double gate_threshold = 0.5;
  int max_context = 64;

  void validate() const;  // throws data_error on invalid combinations
  std::string to_model_id() const;
};

// Parse a "ref:k=v,..." model id back into a config.
ReferenceModelConfig parse_reference_id(const std::string& model_id);
bool is_reference_id(const std::string& model_id);

ModelHandle build_reference_model(const ReferenceModelConfig& config);

// Resolve any model id to a handle. "ref:..." builds the reference model;
// anything else is rejected with a backend error naming the id.
ModelHandle resolve_model(const std::string& model_id);

// Family whose answers the writer block plants: prompts end in a key token
// and the answer is that key's class token. Step-profile oracle under the
// linear plant; all-zero profile under the nonlinear plant.
ConceptFamily reference_planted_family(const ReferenceModelConfig& config);

// Family whose states carry no class information (identical last tokens
// across classes, three answer classes), for the nothing-represented case.
ConceptFamily reference_unplanted_family(const ReferenceModelConfig& config);

// Generic filler prompts disjoint from the planted family.
std::vector<std::string> reference_unrelated_prompts(
    const ReferenceModelConfig& config, int count);

// Introspection used by test oracles.
class ReferenceBackend;
const ReferenceBackend& reference_backend(const ModelHandle& model);

class ReferenceBackend final : public Backend {
 public:
  explicit ReferenceBackend(const ReferenceModelConfig& config);

  const std::string& model_id() const override { return model_id_; }
  std::string backend_version() const override;
  int num_layers() const override { return config_.num_layers; }
  int hidden_dim() const override { return config_.hidden_dim; }
  int vocab_size() const override { return config_.vocab_size; }
  int max_context() const override { return config_.max_context; }
  const Tokenizer& tokenizer() const override { return tokenizer_; }
  const ReadoutSpec& readout() const override { return readout_; }

  void forward_states(std::span<const int> tokens, float* out) const override;
  std::vector<double> resume_state_f64(int layer,
                                       std::span<const double> state) const override;

  // ---- oracle access ----
  const ReferenceModelConfig& config() const { return config_; }
  // Embedding row of a token (doubles, length d).
  std::vector<double> embedding(int token) const;
  // Dense matrix of block `i`'s additive map for i > writer (rotation blocks);
  // blocks before the writer are zero and the writer block is the gated write.
  const std::vector<double>& rotation_block(int layer) const;
  // Plant applied by the writer for key slot j (already scaled by beta).
  std::vector<double> writer_plant(int key_slot) const;
  // Key axis for slot j.
  std::vector<double> key_axis(int key_slot) const;
  int num_key_slots() const { return config_.num_classes * config_.keys_per_class; }
  int answer_token(int class_index) const;
  int key_token(int key_slot) const;
  // Composed tail map M with logits(h) = M . h from states at `layer`
  // (valid because the final norm is the identity and all blocks at or
  // after `layer`+1 are linear; requires layer >= writer_layer).
  std::vector<double> tail_matrix(int layer) const;  // [V][d]

  // Applies block `layer` to h, returning the additive contribution.
  std::vector<double> block_delta(int layer, std::span<const double> h) const;

 private:
  void build();
  void self_check();

  ReferenceModelConfig config_;
  std::string model_id_;
  Tokenizer tokenizer_;
  ReadoutSpec readout_;
  std::vector<std::string> vocab_;
  std::vector<double> embeddings_;              // [V][d], tied to unembedding
  std::vector<std::vector<double>> rotations_;  // per layer > writer: [d][d] delta map
  std::vector<std::vector<double>> key_axes_;   // per key slot, length d
  std::vector<std::vector<double>> plants_;     // per key slot, length d (unscaled)
  std::vector<int> answer_tokens_;
  std::vector<int> key_tokens_;
};

}  // namespace lap
