#include "lap/tokenizer.hpp"

#include <cctype>

#include "lap/error.hpp"

namespace lap {

Tokenizer::Tokenizer(std::vector<std::string> vocab, bool space_prefix)
    : vocab_(std::move(vocab)), space_prefix_(space_prefix) {
  if (vocab_.empty()) throw data_error("tokenizer: empty vocabulary");
}

std::vector<int> Tokenizer::encode(std::string_view text) const {
  std::string buffer;
  if (space_prefix_ && !text.empty() && text[0] != ' ') {
    buffer = " ";
    buffer += text;
    text = buffer;
  }
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t id = 1; id < vocab_.size(); ++id) {
      const std::string& p = vocab_[id];
      if (p.empty() || p.size() < best_len || p.size() > text.size() - pos) continue;
      if (text.compare(pos, p.size(), p) == 0 &&
          (p.size() > best_len || best == -1)) {
        best = int(id);
        best_len = p.size();
      }
    }
    if (best < 0) {
      out.push_back(0);
      pos += 1;
    } else {
      out.push_back(best);
      pos += best_len;
    }
  }
  return out;
}

const std::string& Tokenizer::piece(int id) const {
  if (id < 0 || id >= vocab_size()) throw data_error("tokenizer: token id out of range");
  return vocab_[std::size_t(id)];
}

std::string Tokenizer::decode(std::span<const int> ids) const {
  std::string s;
  for (int id : ids) s += piece(id);
  return s;
}

std::optional<int> Tokenizer::find(std::string_view p) const {
  for (std::size_t id = 0; id < vocab_.size(); ++id)
    if (vocab_[id] == p) return int(id);
  return std::nullopt;
}

bool Tokenizer::is_whitespace_token(int id) const {
  const std::string& p = piece(id);
  if (p.empty()) return false;
  for (unsigned char c : p)
    if (!std::isspace(c)) return false;
  return true;
}

}  // namespace lap
