#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treq {

/// Raised for malformed input and violated preconditions at API boundaries.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strand : std::uint8_t { Forward, Reverse };

inline Strand flip(Strand s) { return s == Strand::Forward ? Strand::Reverse : Strand::Forward; }

/// XOR composition: orientation of x relative to z given x~y and y~z.
inline Strand combine(Strand a, Strand b) { return a == b ? Strand::Forward : Strand::Reverse; }

inline char strand_char(Strand s) { return s == Strand::Forward ? '+' : '-'; }

// Base codes: A=0 C=1 G=2 T=3; anything else is 4 and never matches.
inline constexpr std::uint8_t kAmbiguous = 4;

inline std::uint8_t encode_base(char c) {
  switch (c) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    default: return kAmbiguous;
  }
}

inline char decode_base(std::uint8_t code) { return code < 4 ? "ACGT"[code] : 'N'; }

inline std::uint8_t complement(std::uint8_t code) { return code < 4 ? 3 - code : kAmbiguous; }

inline std::vector<std::uint8_t> encode(std::string_view s) {
  std::vector<std::uint8_t> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = encode_base(s[i]);
  return out;
}

inline std::string decode(std::span<const std::uint8_t> codes) {
  std::string out(codes.size(), 'N');
  for (std::size_t i = 0; i < codes.size(); ++i) out[i] = decode_base(codes[i]);
  return out;
}

inline void reverse_complement(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = complement(in[n - 1 - i]);
}

inline std::vector<std::uint8_t> reverse_complement(std::span<const std::uint8_t> in) {
  std::vector<std::uint8_t> out(in.size());
  reverse_complement(in, out);
  return out;
}

std::string reverse_complement(std::string_view seq);

/// ceil(x) tolerant of binary round-off, so ceil(31.0000000001) == 31.
inline std::int64_t ceil_threshold(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9)); }

/// floor(x) with the same tolerance in the other direction.
inline std::int64_t floor_threshold(double x) { return static_cast<std::int64_t>(std::floor(x + 1e-9)); }

/// Shortest decimal that round-trips, used in file headers.
std::string format_real(double v);

}  // namespace treq
