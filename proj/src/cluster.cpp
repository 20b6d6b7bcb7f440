#include "treq/cluster.hpp"

#include <algorithm>
#include <cstdlib>

#include "treq/parallel.hpp"

namespace treq {

// ---------------------------------------------------------------------------
// parameters and small types

double ClusterParams::default_alpha(int read_len) {
  return std::max(0.5, 31.0 / read_len);
}

ClusterParams ClusterParams::for_read_length(int read_len) {
  ClusterParams p;
  p.alpha = default_alpha(read_len);
  return p;
}

void ClusterParams::validate(int read_len) const {
  if (read_len < kMinReadLength) throw Error("read length must be at least 31");
  if (k < 8 || k > 16) throw Error("k must be in [8, 16]");
  if (!(beta_prime > 0.0 && beta_prime <= beta && beta <= 1.0)) {
    throw Error("require 0 < beta' <= beta <= 1");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must be in (0, 1]");
  if (min_overlap(read_len) < kMinReadLength) {
    throw Error("ceil(alpha * L) = " + std::to_string(min_overlap(read_len)) +
                " is below 31; raise alpha to at least 31/L");
  }
  if (read_len > 65535) throw Error("read length above 65535 is not supported");
  if (threads < 1) throw Error("thread count must be positive");
}

int ClusterParams::min_overlap(int read_len) const { return indexed_span(read_len, alpha); }

int ClusterParams::min_paired_overlap(int read_len) const {
  return static_cast<int>(ceil_threshold(alpha * read_len / 2.0));
}

int ClusterParams::phase2_budget(int read_len) const {
  return std::max(1, (read_len - k + 1) / 4);
}

char class_char(ReadClass c) {
  switch (c) {
    case ReadClass::Anchor: return 'A';
    case ReadClass::Member: return 'M';
    case ReadClass::Bad: return 'B';
  }
  return '?';
}

Assignment Assignment::anchor(std::uint32_t id, int read_len) {
  Assignment a;
  a.read_id = id;
  a.cls = ReadClass::Anchor;
  a.anchor_id = id;
  a.shift = 0;
  a.strand = Strand::Forward;
  a.overlap = read_len;
  a.matches = read_len;
  return a;
}

Assignment Assignment::bad(std::uint32_t id) {
  Assignment a;
  a.read_id = id;
  a.cls = ReadClass::Bad;
  a.anchor_id = -1;
  a.shift = -1;
  a.overlap = -1;
  a.matches = -1;
  return a;
}

std::size_t ClusterTable::count(ReadClass c) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [c](const Assignment& a) { return a.cls == c; }));
}

double ClusterTable::cluster_fraction() const {
  return rows.empty() ? 0.0 : static_cast<double>(count(ReadClass::Anchor)) / rows.size();
}

std::size_t SubOptimalEdges::member_edge_count() const {
  std::size_t n = 0;
  for (const auto& v : member) n += v.size();
  return n;
}

std::size_t SubOptimalEdges::anchor_edge_count() const {
  std::size_t n = 0;
  for (const auto& v : anchor) n += v.size();
  return n;
}

Overlap overlap_similarity(std::span<const std::uint8_t> anchor,
                           std::span<const std::uint8_t> member, int shift) {
  const int len = static_cast<int>(member.size());
  const int lo = std::max(0, -shift);
  const int hi = std::min(len, static_cast<int>(anchor.size()) - shift);
  int matches = 0;
  const std::uint8_t* a = anchor.data() + shift;
  const std::uint8_t* m = member.data();
  for (int j = lo; j < hi; ++j) matches += (m[j] == a[j]) & (m[j] < 4);
  return Overlap{std::max(0, hi - lo), matches};
}

std::optional<Overlap> overlap_similarity(const Read& anchor, const Read& member, int shift,
                                          Strand strand) {
  if (std::abs(shift) >= member.length() || anchor.length() != member.length()) {
    return std::nullopt;
  }
  const auto a = anchor.codes();
  auto m = member.codes();
  if (strand == Strand::Reverse) m = reverse_complement(m);
  return overlap_similarity(a, m, shift);
}

Edge compose(int shift_xy, Strand strand_xy, const Edge& y_to_z) {
  if (y_to_z.strand == Strand::Forward) return Edge{y_to_z.dst, shift_xy + y_to_z.shift, strand_xy};
  return Edge{y_to_z.dst, y_to_z.shift - shift_xy, flip(strand_xy)};
}

std::pair<int, Strand> invert(int shift, Strand strand) {
  return strand == Strand::Forward ? std::pair{-shift, strand} : std::pair{shift, strand};
}

// ---------------------------------------------------------------------------
// anchor storage

AnchorStore::AnchorStore(std::size_t n_reads, int read_len) : len_(read_len), slot_(n_reads, -1) {}

void AnchorStore::add(const Read& read) {
  if (slot_[read.id()] >= 0) return;
  slot_[read.id()] = static_cast<std::int64_t>(count_++);
  const std::size_t off = codes_.size();
  codes_.resize(off + len_);
  read.unpack(std::span<std::uint8_t>(codes_.data() + off, len_), true);
}

ClusterState::ClusterState(const ReadLibrary& lib, const ClusterParams& params)
    : anchors(lib.size(), lib.read_length()), index(params.k, params.list_cap) {}

void ClusterState::add_anchor(const Read& read, double alpha) {
  anchors.add(read);
  insert_anchor(index, read.id(), anchors.codes(read.id()), alpha);
}

// ---------------------------------------------------------------------------
// candidate scanning

namespace {

/// Open-addressing counter keyed by (anchor, shift); reset in O(1).
class HitTable {
 public:
  struct Slot {
    std::uint64_t key = 0;
    std::uint32_t stamp = 0;
    std::uint8_t count = 0;
  };

  HitTable() : slots_(1 << 12) {}

  void reset() {
    if (++stamp_ == 0) {
      std::fill(slots_.begin(), slots_.end(), Slot{});
      stamp_ = 1;
    }
    used_ = 0;
  }

  Slot& touch(std::uint64_t key) {
    if (2 * (used_ + 1) > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = hash(key) & mask;
    while (true) {
      Slot& s = slots_[i];
      if (s.stamp != stamp_) {
        s.key = key;
        s.stamp = stamp_;
        s.count = 0;
        ++used_;
        return s;
      }
      if (s.key == key) return s;
      i = (i + 1) & mask;
    }
  }

 private:
  static std::size_t hash(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }

  void grow() {
    std::vector<Slot> old(slots_.size() * 2);
    old.swap(slots_);
    const std::size_t mask = slots_.size() - 1;
    for (const Slot& s : old) {
      if (s.stamp != stamp_) continue;
      std::size_t i = hash(s.key) & mask;
      while (slots_[i].stamp == stamp_) i = (i + 1) & mask;
      slots_[i] = s;
    }
  }

  std::vector<Slot> slots_;
  std::uint32_t stamp_ = 1;
  std::size_t used_ = 0;
};

inline std::uint64_t hit_key(std::uint32_t anchor, int shift) {
  return (std::uint64_t{anchor} << 18) | static_cast<std::uint64_t>(shift + (1 << 17));
}

struct Phase2Candidate {
  std::uint32_t anchor;
  int shift;
  Strand strand;
  int length;
  int matches;
};

class Scanner {
 public:
  Scanner(const ClusterParams& params, int read_len, const PostingArray& index,
          const AnchorStore& anchors)
      : params_(params),
        len_(read_len),
        min_overlap_(params.min_overlap(read_len)),
        index_(index),
        anchors_(anchors),
        fwd_(read_len),
        rev_(read_len),
        need_beta_(read_len + 1),
        need_beta_prime_(read_len + 1) {
    for (int l = 0; l <= read_len; ++l) {
      need_beta_[l] = static_cast<int>(ceil_threshold(params.beta * l));
      need_beta_prime_[l] = static_cast<int>(ceil_threshold(params.beta_prime * l));
    }
    const int budget = params.phase2_budget(read_len);
    const int span = read_len - params.k;
    for (int i = 0; i < budget; ++i) {
      // round(i * span / (budget - 1)), half away from zero
      sampled_.push_back(budget == 1 ? 0 : (2 * i * span + (budget - 1)) / (2 * (budget - 1)));
    }
  }

  int need_beta(int l) const { return need_beta_[l]; }

  std::optional<Assignment> try_assign(const Read& read, std::vector<Edge>* similar) {
    load(read);
    for (Strand strand : {Strand::Forward, Strand::Reverse}) {
      const std::vector<std::uint8_t>& query = strand == Strand::Forward ? fwd_ : rev_;
      kmer_codes(query, params_.k, kc_);
      hits_.reset();
      std::optional<Assignment> found;
      for (int q = 0; q < static_cast<int>(kc_.size()) && !found; ++q) {
        if (kc_[q] < 0) continue;
        index_.for_each(static_cast<std::uint32_t>(kc_[q]), [&](const Posting& p) {
          const int shift = static_cast<int>(p.pos) - q;
          const int l = len_ - std::abs(shift);
          if (l < min_overlap_) return true;
          HitTable::Slot& slot = hits_.touch(hit_key(p.anchor_id, shift));
          if (slot.count >= 2 || ++slot.count < 2) return true;
          const Overlap ov = overlap_similarity(anchors_.codes(p.anchor_id), query, shift);
          const bool member = ov.matches >= need_beta_[l];
          if (similar != nullptr && ov.matches >= need_beta_prime_[l]) {
            note_similar(*similar, Edge{p.anchor_id, shift, strand});
          }
          if (member) {
            Assignment a;
            a.read_id = read.id();
            a.cls = ReadClass::Member;
            a.anchor_id = p.anchor_id;
            a.shift = shift;
            a.strand = strand;
            a.overlap = l;
            a.matches = ov.matches;
            found = a;
            return false;
          }
          return true;
        });
      }
      if (found) return found;
    }
    return std::nullopt;
  }

  /// Paired-end relaxed search against one anchor at the given orientation.
  std::optional<Assignment> relaxed_overlap(const Read& read, std::uint32_t anchor_id,
                                            Strand strand) {
    load(read);
    const std::vector<std::uint8_t>& query = strand == Strand::Forward ? fwd_ : rev_;
    const auto anchor = anchors_.codes(anchor_id);
    const int min_l = params_.min_paired_overlap(len_);
    std::optional<Assignment> best;
    for (int shift = -(len_ - min_l); shift <= len_ - min_l; ++shift) {
      const int l = len_ - std::abs(shift);
      if (best && l <= best->overlap) continue;
      const Overlap ov = overlap_similarity(anchor, query, shift);
      if (ov.matches < need_beta_[l]) continue;
      Assignment a;
      a.read_id = read.id();
      a.cls = ReadClass::Member;
      a.anchor_id = anchor_id;
      a.shift = shift;
      a.strand = strand;
      a.overlap = l;
      a.matches = ov.matches;
      a.forced = true;
      best = a;
    }
    return best;
  }

  /// Phase-2 scan over the sampled k-mer starts. Every distinct
  /// (anchor, shift, strand) with overlap >= ceil(alpha L) and similarity
  /// >= beta' is reported once, in discovery order.
  void scan_sampled(const Read& read, std::vector<Phase2Candidate>& out) {
    out.clear();
    load(read);
    for (Strand strand : {Strand::Forward, Strand::Reverse}) {
      const std::vector<std::uint8_t>& query = strand == Strand::Forward ? fwd_ : rev_;
      kmer_codes(query, params_.k, kc_);
      hits_.reset();
      for (int q : sampled_) {
        if (q >= static_cast<int>(kc_.size()) || kc_[q] < 0) continue;
        index_.for_each(static_cast<std::uint32_t>(kc_[q]), [&](const Posting& p) {
          const int shift = static_cast<int>(p.pos) - q;
          const int l = len_ - std::abs(shift);
          if (l < min_overlap_) return;
          HitTable::Slot& slot = hits_.touch(hit_key(p.anchor_id, shift));
          if (slot.count++ > 0) return;
          const Overlap ov = overlap_similarity(anchors_.codes(p.anchor_id), query, shift);
          if (ov.matches >= need_beta_prime_[l]) {
            out.push_back(Phase2Candidate{p.anchor_id, shift, strand, l, ov.matches});
          }
        });
      }
    }
  }

 private:
  void load(const Read& read) {
    read.unpack(fwd_, true);
    reverse_complement(fwd_, rev_);
  }

  void note_similar(std::vector<Edge>& similar, const Edge& e) const {
    if (similar.size() >= params_.max_anchor_edges) return;
    for (const Edge& x : similar) {
      if (x.dst == e.dst) return;
    }
    similar.push_back(e);
  }

  const ClusterParams& params_;
  int len_;
  int min_overlap_;
  const PostingArray& index_;
  const AnchorStore& anchors_;
  std::vector<std::uint8_t> fwd_, rev_;
  std::vector<std::int64_t> kc_;
  std::vector<int> need_beta_, need_beta_prime_;
  std::vector<int> sampled_;
  HitTable hits_;
};

void add_anchor_edge(SubOptimalEdges& edges, std::uint32_t src, const Edge& e, std::size_t cap) {
  auto& list = edges.anchor[src];
  if (list.size() >= cap) return;
  for (const Edge& x : list) {
    if (x.dst == e.dst) return;
  }
  list.push_back(e);
}

void make_anchor(ClusterResult& res, const Read& read, const std::vector<Edge>& similar,
                 const ClusterParams& params) {
  const std::uint32_t id = read.id();
  res.state.add_anchor(read, params.alpha);
  res.table.rows[id] = Assignment::anchor(id, read.length());
  for (const Edge& e : similar) {
    if (e.dst == id) continue;
    add_anchor_edge(res.edges, id, e, params.max_anchor_edges);
    const auto [shift, strand] = invert(e.shift, e.strand);
    add_anchor_edge(res.edges, e.dst, Edge{id, shift, strand}, params.max_anchor_edges);
  }
}

ClusterResult make_result(const ReadLibrary& lib, const ClusterParams& params, bool paired) {
  ClusterTable table;
  table.k = params.k;
  table.alpha = params.alpha;
  table.beta = params.beta;
  table.paired = paired;
  table.read_len = lib.read_length();
  table.rows.resize(lib.size());
  for (std::size_t i = 0; i < lib.size(); ++i) {
    table.rows[i] = Assignment::bad(static_cast<std::uint32_t>(i));
  }
  return ClusterResult{std::move(table), SubOptimalEdges(lib.size()), ClusterState(lib, params)};
}

/// Speculative membership of each read in [begin, end) against the frozen
/// index. Only used when more than one worker is requested.
std::vector<std::optional<Assignment>> speculate(const ReadLibrary& lib, const ClusterParams& params,
                                                 const ClusterState& state, std::size_t begin,
                                                 std::size_t end,
                                                 std::vector<Scanner>& scanners) {
  std::vector<std::optional<Assignment>> out(end - begin);
  parallel_for(end - begin, params.threads, [&](std::size_t j, int worker) {
    const Read read = lib[begin + j];
    if (classify_bad_read(read, params.k)) return;
    out[j] = scanners[worker].try_assign(read, nullptr);
  }, 32);
  (void)state;
  return out;
}

std::vector<Scanner> make_scanners(const ClusterParams& params, int read_len,
                                   const ClusterState& state) {
  std::vector<Scanner> scanners;
  for (int w = 0; w < std::max(1, params.threads); ++w) {
    scanners.emplace_back(params, read_len, state.index, state.anchors);
  }
  return scanners;
}

constexpr std::size_t kBatchPerThread = 2048;

}  // namespace

std::optional<Assignment> try_assign(const Read& read, const PostingArray& index,
                                     const AnchorStore& anchors, const ClusterParams& params,
                                     std::vector<Edge>* similar) {
  Scanner scanner(params, read.length(), index, anchors);
  return scanner.try_assign(read, similar);
}

// ---------------------------------------------------------------------------
// phase 1

ClusterResult cluster_single_end(const ReadLibrary& lib, const ClusterParams& params) {
  const int len = lib.read_length();
  params.validate(len);
  ClusterResult res = make_result(lib, params, false);
  auto scanners = make_scanners(params, len, res.state);
  Scanner& main = scanners.front();
  std::vector<Edge> similar;

  auto commit = [&](std::size_t i, const std::optional<Assignment>& spec) {
    const Read read = lib[i];
    if (classify_bad_read(read, params.k)) return;
    if (spec) {
      res.table.rows[i] = *spec;
      return;
    }
    similar.clear();
    if (auto m = main.try_assign(read, &similar)) {
      res.table.rows[i] = *m;
    } else {
      make_anchor(res, read, similar, params);
    }
  };

  if (params.threads <= 1) {
    for (std::size_t i = 0; i < lib.size(); ++i) commit(i, std::nullopt);
  } else {
    const std::size_t batch = kBatchPerThread * params.threads;
    for (std::size_t b = 0; b < lib.size(); b += batch) {
      const std::size_t e = std::min(lib.size(), b + batch);
      const auto spec = speculate(lib, params, res.state, b, e, scanners);
      for (std::size_t i = b; i < e; ++i) commit(i, spec[i - b]);
    }
  }
  return res;
}

ClusterResult cluster_paired_end(const ReadLibrary& lib, const ClusterParams& params) {
  const int len = lib.read_length();
  params.validate(len);
  if (!lib.paired() || lib.size() % 2 != 0) {
    throw Error("paired-end clustering needs an interleaved library with an even read count");
  }
  ClusterResult res = make_result(lib, params, true);
  auto scanners = make_scanners(params, len, res.state);
  Scanner& main = scanners.front();

  struct End {
    bool bad = false;
    std::optional<Assignment> member;
    std::vector<Edge> similar;
  };
  End ends[2];

  auto evaluate = [&](End& end, const Read& read, const std::optional<Assignment>& spec) {
    end.similar.clear();
    end.member.reset();
    end.bad = classify_bad_read(read, params.k);
    if (end.bad) return;
    if (spec) {
      end.member = spec;
      return;
    }
    end.member = main.try_assign(read, &end.similar);
  };

  auto commit = [&](std::size_t t, const std::optional<Assignment>& spec1,
                    const std::optional<Assignment>& spec2) {
    const Read r[2] = {lib[2 * t], lib[2 * t + 1]};
    evaluate(ends[0], r[0], spec1);
    evaluate(ends[1], r[1], spec2);
    auto& rows = res.table.rows;
    bool anchor_end[2] = {false, false};

    if (ends[0].bad && ends[1].bad) return;
    if (ends[0].bad || ends[1].bad) {
      const int good = ends[0].bad ? 1 : 0;
      if (ends[good].member) {
        rows[r[good].id()] = *ends[good].member;
        return;
      }
      anchor_end[0] = anchor_end[1] = true;  // bad mate forced to anchor
    } else if (ends[0].member && ends[1].member) {
      rows[r[0].id()] = *ends[0].member;
      rows[r[1].id()] = *ends[1].member;
      return;
    } else if (!ends[0].member && !ends[1].member) {
      anchor_end[0] = anchor_end[1] = true;
    } else {
      const int m = ends[0].member ? 0 : 1;
      const int a = 1 - m;
      const auto partner = static_cast<std::uint32_t>(ends[m].member->anchor_id ^ 1);
      std::optional<Assignment> relaxed;
      if (res.state.anchors.contains(partner)) {
        relaxed = main.relaxed_overlap(r[a], partner, ends[m].member->strand);
      }
      if (relaxed) {
        rows[r[m].id()] = *ends[m].member;
        rows[r[a].id()] = *relaxed;
        return;
      }
      const Assignment& joined = *ends[m].member;
      ends[m].similar.insert(ends[m].similar.begin(),
                             Edge{static_cast<std::uint32_t>(joined.anchor_id), joined.shift,
                                  joined.strand});
      anchor_end[0] = anchor_end[1] = true;
    }
    for (int e = 0; e < 2; ++e) {
      if (anchor_end[e]) make_anchor(res, r[e], ends[e].similar, params);
    }
  };

  const std::size_t pairs = lib.size() / 2;
  if (params.threads <= 1) {
    for (std::size_t t = 0; t < pairs; ++t) commit(t, std::nullopt, std::nullopt);
  } else {
    const std::size_t batch = kBatchPerThread * params.threads;
    for (std::size_t b = 0; b < pairs; b += batch) {
      const std::size_t e = std::min(pairs, b + batch);
      const auto spec = speculate(lib, params, res.state, 2 * b, 2 * e, scanners);
      for (std::size_t t = b; t < e; ++t) {
        commit(t, spec[2 * (t - b)], spec[2 * (t - b) + 1]);
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// phase 2

void run_phase2(ClusterTable& table, SubOptimalEdges& edges, const ReadLibrary& lib,
                const ClusterState& state, const ClusterParams& params) {
  const int len = lib.read_length();
  std::vector<std::uint32_t> members;
  for (const Assignment& a : table.rows) {
    if (a.cls == ReadClass::Member) members.push_back(a.read_id);
  }
  if (edges.member.size() != lib.size()) edges.member.assign(lib.size(), {});
  auto scanners = make_scanners(params, len, state);
  std::vector<std::vector<Phase2Candidate>> scratch(scanners.size());

  parallel_for(members.size(), params.threads, [&](std::size_t idx, int worker) {
    const std::uint32_t id = members[idx];
    Scanner& scanner = scanners[worker];
    auto& cands = scratch[worker];
    scanner.scan_sampled(lib[id], cands);

    Assignment& cur = table.rows[id];
    if (!cur.forced) {
      const Phase2Candidate* best = nullptr;
      for (const auto& c : cands) {
        if (c.matches < scanner.need_beta(c.length)) continue;
        if (best == nullptr || c.length > best->length ||
            (c.length == best->length && c.anchor < best->anchor)) {
          best = &c;
        }
      }
      if (best != nullptr && best->length > cur.overlap) {
        cur.anchor_id = best->anchor;
        cur.shift = best->shift;
        cur.strand = best->strand;
        cur.overlap = best->length;
        cur.matches = best->matches;
      }
    }

    std::vector<Phase2Candidate> per_anchor;
    for (const auto& c : cands) {
      if (c.anchor == cur.anchor_id) continue;
      auto it = std::find_if(per_anchor.begin(), per_anchor.end(),
                             [&](const Phase2Candidate& x) { return x.anchor == c.anchor; });
      if (it == per_anchor.end()) {
        per_anchor.push_back(c);
      } else if (c.length > it->length) {
        *it = c;
      }
    }
    std::stable_sort(per_anchor.begin(), per_anchor.end(),
                     [](const Phase2Candidate& x, const Phase2Candidate& y) {
                       if (x.length != y.length) return x.length > y.length;
                       return x.anchor < y.anchor;
                     });
    if (per_anchor.size() > params.max_member_edges) per_anchor.resize(params.max_member_edges);
    auto& out = edges.member[id];
    out.clear();
    for (const auto& c : per_anchor) out.push_back(Edge{c.anchor, c.shift, c.strand});
  }, 16);
}

ClusterTable reassign_optimal(const ClusterTable& table, const ReadLibrary& lib,
                              const ClusterState& state, const ClusterParams& params) {
  ClusterTable out = table;
  SubOptimalEdges scratch(lib.size());
  run_phase2(out, scratch, lib, state, params);
  return out;
}

SubOptimalEdges record_suboptimal(const ClusterTable& table, const ReadLibrary& lib,
                                  const ClusterState& state, const ClusterParams& params,
                                  const SubOptimalEdges& phase1_edges) {
  ClusterTable copy = table;
  SubOptimalEdges edges(lib.size());
  edges.anchor = phase1_edges.anchor;
  run_phase2(copy, edges, lib, state, params);
  return edges;
}

ClusterResult cluster_library(const ReadLibrary& lib, const ClusterParams& params) {
  ClusterResult res = params.paired ? cluster_paired_end(lib, params)
                                    : cluster_single_end(lib, params);
  run_phase2(res.table, res.edges, lib, res.state, params);
  return res;
}

}  // namespace treq
