#include "treq/kmer_index.hpp"

#include <algorithm>
#include <cstdlib>
#include <new>

namespace treq {

std::optional<KmerCode> kmer_code(std::span<const std::uint8_t> window) {
  const int k = static_cast<int>(window.size());
  if (k < 1 || k > 16) throw Error("k-mer length must be in [1, 16]");
  std::uint32_t v = 0;
  for (std::uint8_t c : window) {
    if (c >= 4) return std::nullopt;
    v = (v << 2) | c;
  }
  return KmerCode{v, k};
}

void kmer_codes(std::span<const std::uint8_t> codes, int k, std::vector<std::int64_t>& out) {
  const int n = static_cast<int>(codes.size());
  out.assign(n >= k ? n - k + 1 : 0, -1);
  const std::uint32_t mask = k == 16 ? 0xffffffffu : (1u << (2 * k)) - 1;
  std::uint32_t v = 0;
  int valid = 0;  // consecutive good bases ending at j
  for (int j = 0; j < n; ++j) {
    if (codes[j] >= 4) {
      valid = 0;
      v = 0;
      continue;
    }
    v = ((v << 2) | codes[j]) & mask;
    if (++valid >= k) out[j - k + 1] = v;
  }
}

void PostingArray::FreeDeleter::operator()(std::uint32_t* p) const { std::free(p); }

PostingArray::PostingArray(int k, std::size_t cap) : k_(k), cap_(cap) {
  if (k < 8 || k > 16) throw Error("k must be in [8, 16]");
  if (cap == 0) throw Error("posting list cap must be positive");
  const int bucket_bits = std::min(2 * k, 24);
  tag_shift_ = 2 * k - bucket_bits;
  tag_mask_ = (1u << tag_shift_) - 1;
  bucket_count_ = std::size_t{1} << bucket_bits;
  // calloc keeps untouched head pages unmapped.
  auto alloc = [&] {
    auto* p = static_cast<std::uint32_t*>(std::calloc(bucket_count_, sizeof(std::uint32_t)));
    if (p == nullptr) throw std::bad_alloc();
    return std::unique_ptr<std::uint32_t[], FreeDeleter>(p);
  };
  heads_ = alloc();
  tails_ = alloc();
}

bool PostingArray::insert(KmerCode code, Posting p) {
  if (code.k != k_) throw Error("k-mer length does not match the posting array");
  if (list_size(code) >= cap_) return false;
  if (size_ >= 0xfffffffeu) throw Error("posting array is full");
  const std::size_t i = size_;
  if ((i >> kBlockBits) >= blocks_.size()) {
    blocks_.emplace_back(new Entry[std::size_t{1} << kBlockBits]);
  }
  const auto idx = static_cast<std::uint32_t>(i + 1);
  const std::uint32_t bucket = code.value >> tag_shift_;
  Entry& e = at(idx);
  e.anchor = p.anchor_id;
  e.pos = p.pos;
  e.tag = static_cast<std::uint8_t>(code.value & tag_mask_);
  e.next = 0;
  if (tails_[bucket] == 0) {
    heads_[bucket] = idx;
  } else {
    at(tails_[bucket]).next = idx;
  }
  tails_[bucket] = idx;
  ++size_;
  return true;
}

std::size_t PostingArray::list_size(KmerCode code) const {
  std::size_t n = 0;
  for_each(code.value, [&](const Posting&) { ++n; });
  return n;
}

std::vector<Posting> PostingArray::list(KmerCode code) const {
  std::vector<Posting> out;
  for_each(code.value, [&](const Posting& p) { out.push_back(p); });
  return out;
}

int indexed_span(int read_len, double alpha) {
  return static_cast<int>(std::min<std::int64_t>(read_len, ceil_threshold(alpha * read_len)));
}

std::vector<int> indexed_starts(int read_len, int k, double alpha) {
  const int span = indexed_span(read_len, alpha);
  std::vector<int> starts;
  for (int s = 0; s + k <= span; ++s) starts.push_back(s);
  for (int s = std::max(read_len - span, 0); s + k <= read_len; ++s) {
    if (starts.empty() || s > starts.back()) starts.push_back(s);
  }
  return starts;
}

std::size_t insert_anchor(PostingArray& array, std::uint32_t anchor_id,
                          std::span<const std::uint8_t> anchor_codes, double alpha) {
  const int len = static_cast<int>(anchor_codes.size());
  const int k = array.k();
  std::size_t stored = 0;
  for (int s : indexed_starts(len, k, alpha)) {
    auto code = kmer_code(anchor_codes.subspan(s, k));
    if (!code) continue;
    stored += array.insert(*code, Posting{anchor_id, static_cast<std::uint16_t>(s)});
  }
  return stored;
}

std::vector<Candidate> candidates(const PostingArray& array, KmerCode code, int query_pos) {
  std::vector<Candidate> out;
  array.for_each(code.value, [&](const Posting& p) {
    out.push_back(Candidate{p, static_cast<int>(p.pos) - query_pos});
  });
  return out;
}

}  // namespace treq
