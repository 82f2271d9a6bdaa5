#include "lap/hash.hpp"

namespace lap {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

}  // namespace lap
