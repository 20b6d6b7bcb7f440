#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "treq/align.hpp"
#include "treq/cluster.hpp"
#include "treq/genome.hpp"
#include "treq/readio.hpp"
#include "treq/sam.hpp"

namespace treq {

/// Primary SAM record of one anchor read.
struct AnchorPlacement {
  std::uint32_t anchor_id = 0;
  bool mapped = false;
  std::string ref_name = "*";
  int ref_id = -1;            // filled by resolve_references
  std::int64_t pos = 0;       // 0-based leftmost aligned base
  std::int64_t unclipped = 0;  // pos minus the leading soft clip
  Strand strand = Strand::Forward;
  int mapq = 0;
  std::string cigar = "*";
  int flag = sam_flag::kUnmapped;
  std::string raw;  // the record text, emitted verbatim
};

struct AnchorSet {
  std::vector<std::string> header;
  std::vector<AnchorPlacement> placements;
  std::vector<std::int32_t> slot;  // read id -> index into placements, -1 otherwise

  const AnchorPlacement* find(std::uint32_t read_id) const {
    return read_id < slot.size() && slot[read_id] >= 0 ? &placements[slot[read_id]] : nullptr;
  }
};

/// Every anchor of `table` must have exactly one primary record.
AnchorSet parse_anchor_sam(std::istream& in, const ClusterTable& table);

/// Sets ref_id of mapped placements; unknown reference names are fatal.
void resolve_references(AnchorSet& anchors, const Genome& genome);

struct InsertModel {
  double mean = 0.0;
  double sd = 1.0;
};

/// Gapless placement implied by an anchor and a (shift, strand) relation.
struct ImpliedPlacement {
  int ref_id = -1;
  std::int64_t start = 0;  // leftmost base of the oriented member
  Strand strand = Strand::Forward;
  bool in_bounds = false;
  int mismatches = -1;  // -1 when out of bounds
  int score = 0;
};

/// Alignment of a member together with the anchor MAPQ it inherits.
struct MemberHit {
  AlignmentResult aln;
  int mapq = 0;
  bool used_sw = false;
};

/// Member base j pairs with anchor base j + shift; `member` is forward
/// (as sequenced), N-masked. Empty when the anchor is unmapped.
std::optional<ImpliedPlacement> place_member(std::span<const std::uint8_t> member, int shift,
                                             Strand strand, const AnchorPlacement& anchor,
                                             const Genome& genome, const ScoreScheme& scheme = {});

/// Keeps the Hamming placement unless its mismatches outweigh a gap opening
/// (or it falls off the chromosome); then aligns locally within +-L of it.
/// Empty when nothing can be aligned.
std::optional<AlignmentResult> refine(std::span<const std::uint8_t> member,
                                      const ImpliedPlacement& placement, const Genome& genome,
                                      const ScoreScheme& scheme = {}, bool* used_sw = nullptr);

/// Best alignment over the assigned anchor, the member's sub-optimal anchors
/// and one further anchor-anchor hop from any of those. Ties go to the lower
/// reference index, then the lower position, then the forward strand.
std::optional<MemberHit> search_suboptimal(std::span<const std::uint8_t> member,
                                           const Assignment& assignment,
                                           const SubOptimalEdges& edges,
                                           const AnchorSet& anchors, const Genome& genome,
                                           const ScoreScheme& scheme = {});

/// Drops hits below min_score(L).
std::optional<MemberHit> finalize(std::optional<MemberHit> best, int read_len);

/// max(end) - min(start) over two mapped alignments.
std::int64_t insert_size(const AlignmentResult& a, const AlignmentResult& b);

/// Same reference, opposite strands, insert within mean +- 5 sd (closed).
bool concordant(const AlignmentResult& a, const AlignmentResult& b, const InsertModel& model);

/// Rescues a discordant or half-mapped member pair by aligning the weaker
/// end near the position implied by the stronger one. Returns whether a
/// rescue was adopted; never turns a concordant pair discordant.
bool resolve_pair(std::span<const std::uint8_t> end1, std::span<const std::uint8_t> end2,
                  std::optional<MemberHit>& hit1, std::optional<MemberHit>& hit2,
                  const InsertModel& model, const Genome& genome,
                  const ScoreScheme& scheme = {});

inline constexpr std::size_t kMinInsertPairs = 1000;

/// Median and 1.4826 * MAD of the observed inserts, sd clamped to >= 1.
InsertModel estimate_insert(std::vector<std::int64_t> inserts);
/// Inserts of mapped anchor pairs on one reference with opposite strands.
InsertModel estimate_insert(const AnchorSet& anchors, const ClusterTable& table);

struct MapOptions {
  int threads = 1;
  std::optional<InsertModel> insert;
  ScoreScheme scheme;
  std::string command_line;
};

struct MapStats {
  std::size_t reads = 0;
  std::size_t anchors = 0;
  std::size_t members_mapped = 0;
  std::size_t members_unmapped = 0;
  std::size_t bad = 0;
  std::size_t smith_waterman = 0;
  std::size_t rescued = 0;
  std::optional<InsertModel> insert;
};

/// Writes one SAM record per library read in read-id order: anchors verbatim
/// from `anchors`, members reconstructed, bad reads unmapped.
MapStats map_clusters(const Genome& genome, const ClusterTable& table,
                      const SubOptimalEdges& edges, const ReadLibrary& lib,
                      const AnchorSet& anchors, std::ostream& out, const MapOptions& options);

}  // namespace treq
