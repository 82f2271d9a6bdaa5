#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lap {

// Greedy longest-prefix-match tokenizer over an explicit vocabulary.
// Id 0 is reserved for <unk>: any character that starts no vocabulary entry
// is consumed one byte at a time as token 0. With space_prefix set the
// encoder prepends one space when the text does not start with one, the way
// sentencepiece-style tokenizers emit a word-boundary marker; digit-prefix
// vocabularies then encode a bare digit as [space, digit].
class Tokenizer {
 public:
  explicit Tokenizer(std::vector<std::string> vocab, bool space_prefix = false);

  std::vector<int> encode(std::string_view text) const;
  const std::string& piece(int id) const;
  std::string decode(std::span<const int> ids) const;
  std::optional<int> find(std::string_view piece) const;

  int vocab_size() const { return int(vocab_.size()); }

  // True when the token's text is non-empty and entirely whitespace.
  bool is_whitespace_token(int id) const;

 private:
  std::vector<std::string> vocab_;
  bool space_prefix_;
};

}  // namespace lap
