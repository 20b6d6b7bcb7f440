#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treq {

namespace sam_flag {
inline constexpr int kPaired = 0x1;
inline constexpr int kProperPair = 0x2;
inline constexpr int kUnmapped = 0x4;
inline constexpr int kMateUnmapped = 0x8;
inline constexpr int kReverse = 0x10;
inline constexpr int kMateReverse = 0x20;
inline constexpr int kFirst = 0x40;
inline constexpr int kSecond = 0x80;
inline constexpr int kSecondary = 0x100;
inline constexpr int kSupplementary = 0x800;
}  // namespace sam_flag

struct SamRecord {
  std::string qname;
  int flag = sam_flag::kUnmapped;
  std::string rname = "*";
  std::int64_t pos = 0;  // 1-based, 0 when unplaced
  int mapq = 0;
  std::string cigar = "*";
  std::string rnext = "*";
  std::int64_t pnext = 0;
  std::int64_t tlen = 0;
  std::string seq = "*";
  std::string qual = "*";
  std::vector<std::string> tags;

  bool mapped() const { return (flag & sam_flag::kUnmapped) == 0 && rname != "*" && pos > 0; }
  bool primary() const {
    return (flag & (sam_flag::kSecondary | sam_flag::kSupplementary)) == 0;
  }
};

/// Parses one alignment line; errors carry `lineno`.
SamRecord parse_sam_line(std::string_view line, std::size_t lineno);
std::string format_sam(const SamRecord& rec);

/// Streams a SAM file: header lines are collected, records handed out one
/// at a time together with their raw text.
class SamReader {
 public:
  explicit SamReader(std::istream& in);
  const std::vector<std::string>& header() const { return header_; }
  bool next(SamRecord& rec, std::string* raw = nullptr);
  std::size_t line_number() const { return lineno_; }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::string pending_;
  bool has_pending_ = false;
  std::size_t lineno_ = 0;
};

/// Read id carried by a query name: "treq:<id>" or a bare number, with an
/// optional "/1" or "/2" suffix. Paired records name both mates after the
/// first, so FLAG 0x80 adds one. Empty when the name carries no id.
std::optional<std::uint64_t> read_id_from_record(std::string_view qname, int flag);

/// "treq:<id>" for single-end reads, "treq:<2t>" for both mates of pair t.
std::string treq_qname(std::uint64_t read_id, bool paired);

}  // namespace treq
