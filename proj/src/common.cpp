#include "treq/common.hpp"

#include <charconv>

namespace treq {

std::string reverse_complement(std::string_view seq) {
  std::string out(seq.size(), 'N');
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out[seq.size() - 1 - i] = decode_base(complement(encode_base(seq[i])));
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace treq
