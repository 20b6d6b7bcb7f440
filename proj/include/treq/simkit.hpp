#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "treq/cluster.hpp"
#include "treq/common.hpp"
#include "treq/mapper.hpp"
#include "treq/readio.hpp"

namespace treq {

inline constexpr const char* kSimRefName = "chrS";

struct SimParams {
  std::int64_t genome_len = 1'000'000;  // G
  int read_len = 100;                  // L
  double coverage = 10.0;              // used when n_reads == 0
  std::int64_t n_reads = 0;            // reads, not pairs
  double epsilon = 0.0;
  bool paired = false;
  double insert_mean = 300.0;
  double insert_sd = 30.0;
  std::uint64_t seed = 1;

  void validate() const;
  /// n_reads, or round(coverage * G / L) rounded down to even when paired.
  std::int64_t read_count() const;
};

struct TruthRecord {
  std::uint64_t read_id = 0;
  std::string ref = kSimRefName;
  std::int64_t pos = 0;  // 0-based leftmost
  Strand strand = Strand::Forward;
  std::int64_t mate_id = -1;
  std::int64_t insert = -1;
};

struct SimulatedReads {
  std::vector<std::string> seqs;  // as sequenced; mate 1 at even ids when paired
  std::vector<TruthRecord> truth;
  bool paired = false;

  ReadLibrary library(ReadOptions opts = {}) const;
};

/// Uniform i.i.d. bases from mt19937_64(seed).
std::string generate_genome(std::int64_t length, std::uint64_t seed);
/// Same, checking G >= L.
std::string generate_genome(const SimParams& params);

/// Uniform starts and strands, substitution errors at rate epsilon; pairs
/// draw an insert from Normal(mean, sd) truncated to [2L, G] and read the
/// second mate from the opposite strand.
SimulatedReads sample_reads(const std::string& genome, const SimParams& params);

/// Bare numeric read names ("<id>", or "<2t>" for both mates of pair t)
/// and constant quality 'I'. Writes mate 1 or mate 2 only when `mate` is 1 or 2.
void write_fastq(std::ostream& out, const SimulatedReads& reads, int mate = 0);
void write_truth(std::ostream& out, const std::vector<TruthRecord>& truth);
std::vector<TruthRecord> read_truth(std::istream& in);

/// SAM placing every anchor at its true position with MAPQ 60 and an
/// ungapped CIGAR. Non-anchors are not emitted.
void oracle_place_anchors(std::ostream& out, const ClusterTable& table,
                          const std::vector<TruthRecord>& truth, const ReadLibrary& lib,
                          std::int64_t genome_len);

/// Primary placement of one read as reported by a SAM file.
struct SamCall {
  bool mapped = false;
  std::string ref;
  std::int64_t pos = 0;  // 0-based leftmost
  std::int64_t end = 0;  // exclusive
  Strand strand = Strand::Forward;
  int mapq = 0;
};

/// Calls indexed by read id; reads absent from the SAM stay empty. With
/// n_reads == 0 the vector grows to the largest id seen.
std::vector<std::optional<SamCall>> load_calls(std::istream& in, std::size_t n_reads);

/// Fraction of truth reads (optionally only those with include[id]) mapped on
/// the true reference within +-L of the true start. Unmapped counts as wrong.
double accuracy(const std::vector<std::optional<SamCall>>& calls,
                const std::vector<TruthRecord>& truth, int read_len,
                const std::vector<bool>* include = nullptr);

/// Percentage of reads where exactly one side maps (MAPQ >= threshold) or
/// both map more than L apart.
double alternate_mapping_rate(const std::vector<std::optional<SamCall>>& a,
                              const std::vector<std::optional<SamCall>>& b, int mapq_threshold,
                              int read_len);

/// Proportion of pairs (2t, 2t+1) on one reference, opposite strands and
/// insert within mean +- 5 sd, closed.
double concordance(const std::vector<std::optional<SamCall>>& calls, const InsertModel& model);

}  // namespace treq
