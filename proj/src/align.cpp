#include "treq/align.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace treq {

int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw Error("hamming: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] || a[i] >= 4;
  return d;
}

int hamming(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) throw Error("hamming: length mismatch");
  return hamming(encode(a), encode(b));
}

namespace {

constexpr int kNegInf = std::numeric_limits<int>::min() / 4;

// Traceback byte: bits 0-1 H source, bit 2 E extends, bit 3 F extends.
enum : std::uint8_t { kStop = 0, kDiag = 1, kUp = 2, kLeft = 3 };
constexpr std::uint8_t kEExtend = 4;
constexpr std::uint8_t kFExtend = 8;

void push_op(std::string& ops, char op) { ops.push_back(op); }

std::string run_length(const std::string& ops) {
  std::string out;
  for (std::size_t i = 0; i < ops.size();) {
    std::size_t j = i;
    while (j < ops.size() && ops[j] == ops[i]) ++j;
    out += std::to_string(j - i);
    out.push_back(ops[i]);
    i = j;
  }
  return out;
}

}  // namespace

LocalAlignment smith_waterman(std::span<const std::uint8_t> read,
                              std::span<const std::uint8_t> window, const ScoreScheme& s) {
  const int n = static_cast<int>(read.size());
  const int m = static_cast<int>(window.size());
  LocalAlignment best;
  if (n == 0 || m == 0) {
    best.cigar = n > 0 ? std::to_string(n) + "S" : "";
    return best;
  }
  const int w = m + 1;
  std::vector<std::uint8_t> trace(static_cast<std::size_t>(n + 1) * w, 0);
  std::vector<int> h_prev(w, 0), h_cur(w, 0), f_col(w, kNegInf);
  int best_i = 0, best_j = 0;

  for (int i = 1; i <= n; ++i) {
    h_cur[0] = 0;
    int e = kNegInf;  // gap in read: consumes window bases (left moves)
    const std::uint8_t r = read[i - 1];
    std::uint8_t* row = trace.data() + static_cast<std::size_t>(i) * w;
    for (int j = 1; j <= m; ++j) {
      std::uint8_t t = 0;
      const int e_open = h_cur[j - 1] + s.gap_open;
      const int e_ext = e + s.gap_extend;
      if (e_ext > e_open) {
        e = e_ext;
        t |= kEExtend;
      } else {
        e = e_open;
      }
      const int f_open = h_prev[j] + s.gap_open;
      const int f_ext = f_col[j] + s.gap_extend;
      if (f_ext > f_open) {
        f_col[j] = f_ext;
        t |= kFExtend;
      } else {
        f_col[j] = f_open;
      }
      const bool same = r == window[j - 1] && r < 4;
      const int diag = h_prev[j - 1] + (same ? s.match : s.mismatch);
      int h = 0;
      std::uint8_t src = kStop;
      if (diag > h) {
        h = diag;
        src = kDiag;
      }
      if (f_col[j] > h) {
        h = f_col[j];
        src = kUp;
      }
      if (e > h) {
        h = e;
        src = kLeft;
      }
      h_cur[j] = h;
      row[j] = t | src;
      if (h > best.score || (h == best.score && h > 0 && i > best_i)) {
        best.score = h;
        best_i = i;
        best_j = j;
      }
    }
    std::swap(h_prev, h_cur);
  }

  if (best.score == 0) {
    best.cigar = std::to_string(n) + "S";
    return best;
  }

  // Traceback; `state` is 0 for H, 1 for E (left), 2 for F (up).
  std::string ops;
  int i = best_i, j = best_j, state = 0;
  while (i > 0 && j > 0) {
    const std::uint8_t t = trace[static_cast<std::size_t>(i) * w + j];
    if (state == 0) {
      const std::uint8_t src = t & 3;
      if (src == kStop) break;
      if (src == kDiag) {
        push_op(ops, 'M');
        --i;
        --j;
        continue;
      }
      state = src == kUp ? 2 : 1;
      continue;
    }
    if (state == 1) {
      push_op(ops, 'D');
      const bool ext = t & kEExtend;
      --j;
      state = ext ? 1 : 0;
    } else {
      push_op(ops, 'I');
      const bool ext = t & kFExtend;
      --i;
      state = ext ? 2 : 0;
    }
  }
  std::reverse(ops.begin(), ops.end());
  best.read_begin = i;
  best.ref_begin = j;
  best.read_end = best_i;
  best.ref_end = best_j;
  std::string cigar;
  if (i > 0) cigar += std::to_string(i) + "S";
  cigar += run_length(ops);
  if (best_i < n) cigar += std::to_string(n - best_i) + "S";
  best.cigar = std::move(cigar);
  return best;
}

int min_score(int read_len) { return read_len / 3; }

bool needs_smith_waterman(int mismatches, const ScoreScheme& s) {
  return (s.match - s.mismatch) * mismatches > -s.gap_open;
}

int hamming_score(int length, int mismatches, const ScoreScheme& s) {
  return s.match * (length - mismatches) + s.mismatch * mismatches;
}

namespace {

template <class Fn>
void walk_cigar(std::string_view cigar, Fn&& fn) {
  std::int64_t len = 0;
  bool digits = false;
  for (char c : cigar) {
    if (c >= '0' && c <= '9') {
      len = len * 10 + (c - '0');
      digits = true;
      continue;
    }
    if (!digits) throw Error("malformed CIGAR '" + std::string(cigar) + "'");
    fn(c, static_cast<int>(len));
    len = 0;
    digits = false;
  }
  if (digits) throw Error("malformed CIGAR '" + std::string(cigar) + "'");
}

}  // namespace

int cigar_ref_span(std::string_view cigar) {
  int n = 0;
  walk_cigar(cigar, [&](char op, int len) {
    if (op == 'M' || op == 'D' || op == 'N' || op == '=' || op == 'X') n += len;
  });
  return n;
}

int cigar_read_span(std::string_view cigar) {
  int n = 0;
  walk_cigar(cigar, [&](char op, int len) {
    if (op == 'M' || op == 'I' || op == 'S' || op == '=' || op == 'X') n += len;
  });
  return n;
}

int score_cigar(std::span<const std::uint8_t> read, std::span<const std::uint8_t> ref,
                std::int64_t ref_start, std::string_view cigar, const ScoreScheme& s) {
  std::int64_t q = 0, r = ref_start;
  int score = 0;
  walk_cigar(cigar, [&](char op, int len) {
    switch (op) {
      case 'M': case '=': case 'X':
        if (q + len > static_cast<std::int64_t>(read.size()) || r < 0 ||
            r + len > static_cast<std::int64_t>(ref.size())) {
          throw Error("CIGAR runs past the sequence");
        }
        for (int t = 0; t < len; ++t, ++q, ++r) {
          score += read[q] == ref[r] && read[q] < 4 ? s.match : s.mismatch;
        }
        break;
      case 'I':
        q += len;
        score += s.gap(len);
        break;
      case 'D': case 'N':
        r += len;
        score += s.gap(len);
        break;
      case 'S':
        q += len;
        break;
      case 'H': case 'P':
        break;
      default:
        throw Error(std::string("unknown CIGAR op ") + op);
    }
  });
  if (q != static_cast<std::int64_t>(read.size())) throw Error("CIGAR read span differs from read");
  return score;
}

}  // namespace treq
