#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "treq/common.hpp"

namespace treq {

struct ScoreScheme {
  int match = 3;
  int mismatch = -3;
  int gap_open = -40;   // charged for the first base of a gap
  int gap_extend = -3;  // each further base

  int gap(int length) const { return length <= 0 ? 0 : gap_open + gap_extend * (length - 1); }
};

/// Local alignment of a read inside a reference window. Coordinates are
/// relative to the window; the CIGAR carries soft clips so that its read
/// span always equals the read length.
struct LocalAlignment {
  int score = 0;
  int ref_begin = 0;
  int ref_end = 0;  // exclusive
  int read_begin = 0;
  int read_end = 0;  // exclusive
  std::string cigar;
};

struct AlignmentResult {
  bool mapped = false;
  int score = 0;
  int ref_id = -1;
  std::int64_t ref_start = 0;  // 0-based leftmost reference base
  Strand strand = Strand::Forward;
  std::string cigar;
};

/// Differing positions; codes >= 4 differ from everything.
int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
int hamming(std::string_view a, std::string_view b);

/// Gotoh local alignment over full matrices. Ties in the traceback prefer
/// diagonal, then up (read insertion), then left (deletion); gap states
/// prefer opening over extending. The best cell is the highest score, then
/// the largest read index, then the smallest window index.
LocalAlignment smith_waterman(std::span<const std::uint8_t> read,
                              std::span<const std::uint8_t> window,
                              const ScoreScheme& scheme = {});

/// floor(L / 3)
int min_score(int read_len);

/// Whether a Hamming placement with `mismatches` should be re-aligned:
/// the score lost to mismatches exceeds one gap opening.
bool needs_smith_waterman(int mismatches, const ScoreScheme& scheme = {});

/// Score of a gapless placement with `mismatches` out of `length` bases.
int hamming_score(int length, int mismatches, const ScoreScheme& scheme = {});

/// Reference bases consumed by a CIGAR (M, D, N, =, X).
int cigar_ref_span(std::string_view cigar);
/// Read bases consumed by a CIGAR (M, I, S, =, X).
int cigar_read_span(std::string_view cigar);

/// Replays `cigar` for `read` placed at `ref_start` (the first aligned base)
/// and returns the alignment score. Throws if the CIGAR runs off either
/// sequence.
int score_cigar(std::span<const std::uint8_t> read, std::span<const std::uint8_t> ref,
                std::int64_t ref_start, std::string_view cigar, const ScoreScheme& scheme = {});

}  // namespace treq
