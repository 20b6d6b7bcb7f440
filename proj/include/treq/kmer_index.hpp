#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "treq/common.hpp"

namespace treq {

inline constexpr int kDefaultK = 15;
inline constexpr std::size_t kDefaultListCap = 256;

/// Radix-4 code of a k-mer, most significant base first (A=0 C=1 G=2 T=3).
struct KmerCode {
  std::uint32_t value = 0;
  int k = kDefaultK;
  friend bool operator==(const KmerCode&, const KmerCode&) = default;
};

/// None when the window holds a bad/ambiguous base (code >= 4).
std::optional<KmerCode> kmer_code(std::span<const std::uint8_t> window);

/// Code of every window start in `codes`; -1 where the window is invalid.
void kmer_codes(std::span<const std::uint8_t> codes, int k, std::vector<std::int64_t>& out);

struct Posting {
  std::uint32_t anchor_id;
  std::uint16_t pos;  // k-mer start inside the anchor
  friend bool operator==(const Posting&, const Posting&) = default;
};

struct Candidate {
  Posting posting;
  int shift;  // anchor position - query position
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// The array of 4^k capped posting lists over anchor reads.
///
/// Lists are addressed by the full k-mer code. Physically, codes share
/// 4^min(k,12) bucket heads; each posting carries the remaining code bits
/// as a tag, so a bucket chain interleaves at most 4^(k-12) logical lists.
/// Postings are never removed and each list keeps insertion order.
class PostingArray {
 public:
  explicit PostingArray(int k = kDefaultK, std::size_t cap = kDefaultListCap);

  int k() const { return k_; }
  std::size_t cap() const { return cap_; }
  /// Number of logical lists, 4^k.
  std::uint64_t list_count() const { return std::uint64_t{1} << (2 * k_); }
  std::size_t total_postings() const { return size_; }

  /// Appends unless the list is already at cap; returns whether it was stored.
  bool insert(KmerCode code, Posting p);

  std::size_t list_size(KmerCode code) const;
  std::vector<Posting> list(KmerCode code) const;

  /// Visits the list for `code` in insertion order. A visitor returning
  /// bool stops the walk by returning false.
  template <class Fn>
  void for_each(std::uint32_t code, Fn&& fn) const {
    const std::uint32_t bucket = code >> tag_shift_;
    const std::uint8_t tag = static_cast<std::uint8_t>(code & tag_mask_);
    for (std::uint32_t e = heads_[bucket]; e != 0;) {
      const Entry& entry = at(e);
      if (entry.tag == tag) {
        if constexpr (std::is_same_v<std::invoke_result_t<Fn&, const Posting&>, bool>) {
          if (!fn(Posting{entry.anchor, entry.pos})) return;
        } else {
          fn(Posting{entry.anchor, entry.pos});
        }
      }
      e = entry.next;
    }
  }

 private:
  struct Entry {
    std::uint32_t anchor;
    std::uint32_t next;  // 1-based entry index, 0 terminates
    std::uint16_t pos;
    std::uint8_t tag;
  };
  static constexpr int kBlockBits = 20;

  const Entry& at(std::uint32_t idx) const {
    const std::uint32_t i = idx - 1;
    return blocks_[i >> kBlockBits][i & ((1u << kBlockBits) - 1)];
  }
  Entry& at(std::uint32_t idx) {
    const std::uint32_t i = idx - 1;
    return blocks_[i >> kBlockBits][i & ((1u << kBlockBits) - 1)];
  }

  struct FreeDeleter {
    void operator()(std::uint32_t* p) const;
  };

  int k_;
  std::size_t cap_;
  int tag_shift_;
  std::uint32_t tag_mask_;
  std::size_t bucket_count_;
  std::unique_ptr<std::uint32_t[], FreeDeleter> heads_;
  std::unique_ptr<std::uint32_t[], FreeDeleter> tails_;
  std::vector<std::unique_ptr<Entry[]>> blocks_;
  std::size_t size_ = 0;
};

/// Number of leading bases indexed at each end of an anchor: ceil(alpha * L).
int indexed_span(int read_len, double alpha);

/// Window starts indexed for an anchor: prefix starts [0, span-k] union
/// suffix starts [L-span, L-k], ascending and de-duplicated.
std::vector<int> indexed_starts(int read_len, int k, double alpha);

/// Inserts one posting per valid indexed window of `anchor_codes`.
/// Returns the number of postings actually stored.
std::size_t insert_anchor(PostingArray& array, std::uint32_t anchor_id,
                          std::span<const std::uint8_t> anchor_codes, double alpha);

/// The list for `code` in insertion order with each posting's implied shift.
std::vector<Candidate> candidates(const PostingArray& array, KmerCode code, int query_pos);

}  // namespace treq
