#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "treq/common.hpp"
#include "treq/kmer_index.hpp"
#include "treq/readio.hpp"

namespace treq {

struct ClusterParams {
  double alpha = 0.5;
  double beta = 0.95;
  double beta_prime = 0.8;
  int k = kDefaultK;
  std::size_t list_cap = kDefaultListCap;
  std::size_t max_member_edges = 16;   // S_M
  std::size_t max_anchor_edges = 256;  // S_A
  bool paired = false;
  int threads = 1;

  /// max{0.5, 31/L}
  static double default_alpha(int read_len);
  /// Defaults with alpha resolved for `read_len`.
  static ClusterParams for_read_length(int read_len);

  /// Throws Error when the parameters are inconsistent for this read length.
  void validate(int read_len) const;
  int min_overlap(int read_len) const;        // ceil(alpha * L)
  int min_paired_overlap(int read_len) const;  // ceil(alpha * L / 2)
  int phase2_budget(int read_len) const;      // floor((L - k + 1) / 4), at least 1
};

enum class ReadClass : std::uint8_t { Anchor, Member, Bad };

char class_char(ReadClass c);

struct Assignment {
  std::uint32_t read_id = 0;
  ReadClass cls = ReadClass::Bad;
  std::int64_t anchor_id = -1;
  int shift = 0;  // member base 0 sits at this anchor coordinate
  Strand strand = Strand::Forward;
  int overlap = -1;
  int matches = -1;
  bool forced = false;  // paired-end relaxed membership; kept in memory only

  static Assignment anchor(std::uint32_t id, int read_len);
  static Assignment bad(std::uint32_t id);
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct ClusterTable {
  int k = kDefaultK;
  double alpha = 0.5;
  double beta = 0.95;
  bool paired = false;
  int read_len = 0;
  std::vector<Assignment> rows;

  std::size_t count(ReadClass c) const;
  /// Anchors over all reads (tau).
  double cluster_fraction() const;
};

struct Edge {
  std::uint32_t dst;  // anchor read id
  int shift;          // source placed against dst, same convention as Assignment
  Strand strand;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SubOptimalEdges {
  std::vector<std::vector<Edge>> member;  // indexed by member read id
  std::vector<std::vector<Edge>> anchor;  // indexed by anchor read id

  explicit SubOptimalEdges(std::size_t n_reads = 0) : member(n_reads), anchor(n_reads) {}
  std::size_t member_edge_count() const;
  std::size_t anchor_edge_count() const;
};

struct Overlap {
  int length;
  int matches;
  double similarity() const { return length > 0 ? static_cast<double>(matches) / length : 0.0; }
  friend bool operator==(const Overlap&, const Overlap&) = default;
};

/// Ungapped overlap of `member` (already oriented) against `anchor`:
/// member[j] pairs with anchor[j + shift]. Codes >= 4 never match.
Overlap overlap_similarity(std::span<const std::uint8_t> anchor,
                           std::span<const std::uint8_t> member, int shift);

/// Same on reads; Reverse compares against the member's reverse complement.
/// Empty when |shift| >= L.
std::optional<Overlap> overlap_similarity(const Read& anchor, const Read& member, int shift,
                                          Strand strand);

/// Placement of x relative to z given x relative to y and y relative to z.
Edge compose(int shift_xy, Strand strand_xy, const Edge& y_to_z);

/// Inverse relation: y relative to x given x relative to y.
std::pair<int, Strand> invert(int shift, Strand strand);

/// Bad-masked sequences of anchor reads, addressed by read id.
class AnchorStore {
 public:
  AnchorStore(std::size_t n_reads, int read_len);
  void add(const Read& read);
  bool contains(std::uint32_t read_id) const { return slot_[read_id] >= 0; }
  std::span<const std::uint8_t> codes(std::uint32_t read_id) const {
    return {codes_.data() + static_cast<std::size_t>(slot_[read_id]) * len_,
            static_cast<std::size_t>(len_)};
  }
  std::size_t size() const { return count_; }
  int read_length() const { return len_; }

 private:
  int len_;
  std::size_t count_ = 0;
  std::vector<std::int64_t> slot_;
  std::vector<std::uint8_t> codes_;
};

/// Phase-1 state kept for the second phase: the anchor set and its index.
struct ClusterState {
  AnchorStore anchors;
  PostingArray index;

  ClusterState(const ReadLibrary& lib, const ClusterParams& params);
  void add_anchor(const Read& read, double alpha);
};

struct ClusterResult {
  ClusterTable table;
  SubOptimalEdges edges;
  ClusterState state;
};

/// First-fit membership search: forward orientation over the whole read,
/// then reverse complement. A (read, anchor, shift, strand) candidate is
/// evaluated once it has been hit by two shared k-mers.
/// When `similar` is given it receives the first qualifying triple per anchor
/// with similarity >= beta_prime (at most max_anchor_edges).
std::optional<Assignment> try_assign(const Read& read, const PostingArray& index,
                                     const AnchorStore& anchors, const ClusterParams& params,
                                     std::vector<Edge>* similar = nullptr);

/// Phase 1 for single-end libraries (with anchor-anchor edges).
ClusterResult cluster_single_end(const ReadLibrary& lib, const ClusterParams& params);

/// Phase 1 for paired libraries: pairs are classified together so that
/// no pair ends up with one anchor and one member.
ClusterResult cluster_paired_end(const ReadLibrary& lib, const ClusterParams& params);

/// Phase 2: move members to the anchor with the longest qualifying overlap.
ClusterTable reassign_optimal(const ClusterTable& table, const ReadLibrary& lib,
                              const ClusterState& state, const ClusterParams& params);

/// Member sub-optimal edges from the phase-2 scan; anchor edges are
/// copied from `phase1_edges`.
SubOptimalEdges record_suboptimal(const ClusterTable& table, const ReadLibrary& lib,
                                  const ClusterState& state, const ClusterParams& params,
                                  const SubOptimalEdges& phase1_edges);

/// Both phase-2 products from one scan.
void run_phase2(ClusterTable& table, SubOptimalEdges& edges, const ReadLibrary& lib,
                const ClusterState& state, const ClusterParams& params);

/// Phase 1 (single- or paired-end per params.paired) followed by phase 2.
ClusterResult cluster_library(const ReadLibrary& lib, const ClusterParams& params);

// File formats -------------------------------------------------------------

void write_cluster_table(std::ostream& out, const ClusterTable& table);
ClusterTable read_cluster_table(std::istream& in);
void write_edges(std::ostream& out, const SubOptimalEdges& edges);
SubOptimalEdges read_edges(std::istream& in, std::size_t n_reads);

}  // namespace treq
