#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treq/common.hpp"

namespace treq {

inline constexpr int kMinReadLength = 31;

struct ReadOptions {
  int phred_offset = 33;
  int quality_threshold = 10;  // f; 0 disables quality masking
};

struct LibraryMeta {
  std::size_t n_reads = 0;
  int read_len = 0;
  bool paired = false;
  int phred_offset = 33;
  int quality_threshold = 10;
};

class ReadLibrary;

/// Non-owning view of one read inside a ReadLibrary.
class Read {
 public:
  std::uint32_t id() const { return id_; }
  int length() const { return len_; }

  /// 2-bit code; ambiguous positions decode as 'N' via is_ambiguous().
  std::uint8_t base(int j) const {
    return static_cast<std::uint8_t>((packed_[j >> 5] >> (2 * (j & 31))) & 3u);
  }
  bool is_ambiguous(int j) const { return (n_mask_[j >> 6] >> (j & 63)) & 1u; }
  bool is_bad(int j) const { return (bad_mask_[j >> 6] >> (j & 63)) & 1u; }
  std::uint8_t quality(int j) const { return qual_[j]; }
  std::span<const std::uint8_t> qualities() const { return {qual_, static_cast<std::size_t>(len_)}; }

  /// Unpacks into base codes. With mask_bad every bad base becomes kAmbiguous,
  /// otherwise only 'N' does.
  void unpack(std::span<std::uint8_t> out, bool mask_bad = true) const;
  std::vector<std::uint8_t> codes(bool mask_bad = true) const;
  std::string sequence() const;
  std::size_t bad_count() const;

 private:
  friend class ReadLibrary;
  std::uint32_t id_ = 0;
  int len_ = 0;
  const std::uint64_t* packed_ = nullptr;
  const std::uint64_t* n_mask_ = nullptr;
  const std::uint64_t* bad_mask_ = nullptr;
  const std::uint8_t* qual_ = nullptr;
};

/// Immutable-after-load store of fixed-length 2-bit packed reads.
class ReadLibrary {
 public:
  ReadLibrary(int read_len, bool paired, ReadOptions opts = {});

  /// Appends a read; quals are raw ASCII (offset applied here). Empty quals
  /// means "all high quality".
  void add(std::string_view seq, std::string_view quals = {});

  /// Convenience for tests and simulations: every base gets quality 40.
  static ReadLibrary from_sequences(const std::vector<std::string>& seqs, bool paired = false,
                                    ReadOptions opts = {});

  std::size_t size() const { return n_; }
  int read_length() const { return len_; }
  bool paired() const { return meta_.paired; }
  const LibraryMeta& meta() const { return meta_; }
  Read operator[](std::size_t i) const;

 private:
  int len_;
  std::size_t n_ = 0;
  std::size_t seq_words_;
  std::size_t mask_words_;
  LibraryMeta meta_;
  std::vector<std::uint64_t> packed_;
  std::vector<std::uint64_t> n_mask_;
  std::vector<std::uint64_t> bad_mask_;
  std::vector<std::uint8_t> qual_;
};

struct FastqRecord {
  std::string name;  // header without '@'
  std::string seq;
  std::string qual;
};

/// Streaming 4-line FASTQ reader over a plain or gzip file, or an istream.
class FastqReader {
 public:
  explicit FastqReader(const std::string& path);
  explicit FastqReader(std::istream& in);
  ~FastqReader();
  FastqReader(const FastqReader&) = delete;
  FastqReader& operator=(const FastqReader&) = delete;

  bool next(FastqRecord& rec);
  std::size_t records_read() const { return count_; }
  const std::string& source() const { return source_; }

 private:
  bool getline(std::string& line);
  std::function<bool(std::string&)> getline_;
  void* gz_ = nullptr;
  std::string source_;
  std::size_t count_ = 0;
};

ReadLibrary parse_fastq(FastqReader& in, ReadOptions opts = {});
ReadLibrary parse_fastq_paired(FastqReader& mate1, FastqReader& mate2, ReadOptions opts = {});
ReadLibrary parse_fastq(std::istream& in, ReadOptions opts = {});
ReadLibrary parse_fastq_paired(std::istream& mate1, std::istream& mate2, ReadOptions opts = {});

/// Loads one file (single-end) or two files (paired, interleaved mate 1 at even ids).
ReadLibrary load_library(const std::vector<std::string>& paths, ReadOptions opts = {});

/// Bad-read rules: no good base, span between first and last good base
/// shorter than 2k, or longest good run shorter than k/2.
bool classify_bad_read(const Read& read, int k);

}  // namespace treq
