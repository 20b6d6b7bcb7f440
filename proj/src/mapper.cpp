#include "treq/mapper.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <tuple>

#include "treq/parallel.hpp"

namespace treq {

// ---------------------------------------------------------------------------
// anchor SAM

namespace {

int leading_soft_clip(std::string_view cigar) {
  int len = 0;
  for (char c : cigar) {
    if (c >= '0' && c <= '9') {
      len = len * 10 + (c - '0');
      continue;
    }
    return c == 'S' ? len : 0;
  }
  return 0;
}

}  // namespace

AnchorSet parse_anchor_sam(std::istream& in, const ClusterTable& table) {
  AnchorSet set;
  set.slot.assign(table.rows.size(), -1);
  SamReader reader(in);
  set.header = reader.header();
  SamRecord rec;
  std::string raw;
  while (reader.next(rec, &raw)) {
    if (!rec.primary()) continue;
    const std::string where = "SAM line " + std::to_string(reader.line_number());
    const auto id = read_id_from_record(rec.qname, rec.flag);
    if (!id) throw Error(where + ": query name '" + rec.qname + "' carries no read id");
    if (*id >= table.rows.size() || table.rows[*id].cls != ReadClass::Anchor) {
      throw Error(where + ": read " + std::to_string(*id) + " is not an anchor");
    }
    if (set.slot[*id] >= 0) {
      throw Error(where + ": duplicate primary record for anchor " + std::to_string(*id));
    }
    AnchorPlacement p;
    p.anchor_id = static_cast<std::uint32_t>(*id);
    p.flag = rec.flag;
    p.mapped = rec.mapped();
    p.mapq = rec.mapq;
    if (p.mapped) {
      p.ref_name = rec.rname;
      p.pos = rec.pos - 1;
      p.unclipped = p.pos - leading_soft_clip(rec.cigar);
      p.strand = rec.flag & sam_flag::kReverse ? Strand::Reverse : Strand::Forward;
      p.cigar = rec.cigar;
    }
    p.raw = std::move(raw);
    set.slot[*id] = static_cast<std::int32_t>(set.placements.size());
    set.placements.push_back(std::move(p));
  }
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].cls == ReadClass::Anchor && set.slot[i] < 0) missing.push_back(i);
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " anchor(s) missing from the SAM input:";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) {
      msg += " " + std::to_string(missing[i]);
    }
    if (missing.size() > 10) msg += " ...";
    throw Error(msg);
  }
  return set;
}

void resolve_references(AnchorSet& anchors, const Genome& genome) {
  for (auto& p : anchors.placements) {
    if (!p.mapped) continue;
    p.ref_id = genome.find(p.ref_name);
    if (p.ref_id < 0) throw Error("anchor SAM names reference '" + p.ref_name + "' absent from the genome");
  }
}

// ---------------------------------------------------------------------------
// member placement

namespace {

std::vector<std::uint8_t> oriented(std::span<const std::uint8_t> member, Strand strand) {
  if (strand == Strand::Forward) return {member.begin(), member.end()};
  return reverse_complement(member);
}

bool better(const AlignmentResult& a, const AlignmentResult& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.ref_id != b.ref_id) return a.ref_id < b.ref_id;
  if (a.ref_start != b.ref_start) return a.ref_start < b.ref_start;
  return a.strand == Strand::Forward && b.strand == Strand::Reverse;
}

}  // namespace

std::optional<ImpliedPlacement> place_member(std::span<const std::uint8_t> member, int shift,
                                             Strand strand, const AnchorPlacement& anchor,
                                             const Genome& genome, const ScoreScheme& scheme) {
  if (!anchor.mapped || anchor.ref_id < 0) return std::nullopt;
  const auto len = static_cast<std::int64_t>(member.size());
  ImpliedPlacement p;
  p.ref_id = anchor.ref_id;
  p.strand = combine(anchor.strand, strand);
  p.start = anchor.strand == Strand::Forward ? anchor.unclipped + shift : anchor.unclipped - shift;
  const Chromosome& chrom = genome[p.ref_id];
  if (p.start >= 0 && p.start + len <= chrom.length()) {
    p.in_bounds = true;
    const auto read = oriented(member, p.strand);
    p.mismatches = hamming(read, genome.slice(p.ref_id, p.start, p.start + len));
    p.score = hamming_score(static_cast<int>(len), p.mismatches, scheme);
  }
  return p;
}

std::optional<AlignmentResult> refine(std::span<const std::uint8_t> member,
                                      const ImpliedPlacement& placement, const Genome& genome,
                                      const ScoreScheme& scheme, bool* used_sw) {
  if (used_sw != nullptr) *used_sw = false;
  const auto len = static_cast<std::int64_t>(member.size());
  AlignmentResult out;
  out.ref_id = placement.ref_id;
  out.strand = placement.strand;
  if (placement.in_bounds && !needs_smith_waterman(placement.mismatches, scheme)) {
    out.mapped = true;
    out.score = placement.score;
    out.ref_start = placement.start;
    out.cigar = std::to_string(len) + "M";
    return out;
  }
  const std::int64_t chrom_len = genome[placement.ref_id].length();
  const std::int64_t begin = std::max<std::int64_t>(0, placement.start - len);
  const std::int64_t end = std::min(chrom_len, placement.start + 2 * len);
  if (begin >= end) return std::nullopt;
  if (used_sw != nullptr) *used_sw = true;
  const auto read = oriented(member, placement.strand);
  const LocalAlignment local = smith_waterman(read, genome.slice(placement.ref_id, begin, end), scheme);
  if (local.score <= 0) return std::nullopt;
  out.mapped = true;
  out.score = local.score;
  out.ref_start = begin + local.ref_begin;
  out.cigar = local.cigar;
  return out;
}

std::optional<MemberHit> search_suboptimal(std::span<const std::uint8_t> member,
                                           const Assignment& assignment,
                                           const SubOptimalEdges& edges,
                                           const AnchorSet& anchors, const Genome& genome,
                                           const ScoreScheme& scheme) {
  if (assignment.cls != ReadClass::Member) return std::nullopt;
  struct Relation {
    std::uint32_t anchor;
    int shift;
    Strand strand;
  };
  std::vector<Relation> first{{static_cast<std::uint32_t>(assignment.anchor_id), assignment.shift,
                               assignment.strand}};
  if (assignment.read_id < edges.member.size()) {
    for (const Edge& e : edges.member[assignment.read_id]) first.push_back({e.dst, e.shift, e.strand});
  }
  std::vector<Relation> all = first;
  for (const Relation& r : first) {
    if (r.anchor >= edges.anchor.size()) continue;
    for (const Edge& e : edges.anchor[r.anchor]) {
      const Edge c = compose(r.shift, r.strand, e);
      all.push_back({c.dst, c.shift, c.strand});
    }
  }

  std::optional<MemberHit> best;
  std::vector<std::tuple<int, std::int64_t, Strand>> seen;
  for (const Relation& r : all) {
    if (std::abs(r.shift) >= static_cast<int>(member.size())) continue;
    const AnchorPlacement* anchor = anchors.find(r.anchor);
    if (anchor == nullptr) continue;
    const auto placement = place_member(member, r.shift, r.strand, *anchor, genome, scheme);
    if (!placement) continue;
    const auto key = std::tuple{placement->ref_id, placement->start, placement->strand};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    bool sw = false;
    const auto aln = refine(member, *placement, genome, scheme, &sw);
    if (!aln) continue;
    if (!best || better(*aln, best->aln)) best = MemberHit{*aln, anchor->mapq, sw};
  }
  return best;
}

std::optional<MemberHit> finalize(std::optional<MemberHit> best, int read_len) {
  if (best && best->aln.score < min_score(read_len)) best.reset();
  return best;
}

// ---------------------------------------------------------------------------
// pairs

std::int64_t insert_size(const AlignmentResult& a, const AlignmentResult& b) {
  const std::int64_t end_a = a.ref_start + cigar_ref_span(a.cigar);
  const std::int64_t end_b = b.ref_start + cigar_ref_span(b.cigar);
  return std::max(end_a, end_b) - std::min(a.ref_start, b.ref_start);
}

bool concordant(const AlignmentResult& a, const AlignmentResult& b, const InsertModel& model) {
  if (!a.mapped || !b.mapped || a.ref_id != b.ref_id || a.strand == b.strand) return false;
  const auto insert = static_cast<double>(insert_size(a, b));
  return insert >= model.mean - 5.0 * model.sd && insert <= model.mean + 5.0 * model.sd;
}

bool resolve_pair(std::span<const std::uint8_t> end1, std::span<const std::uint8_t> end2,
                  std::optional<MemberHit>& hit1, std::optional<MemberHit>& hit2,
                  const InsertModel& model, const Genome& genome, const ScoreScheme& scheme) {
  if (!hit1 && !hit2) return false;
  if (hit1 && hit2 && concordant(hit1->aln, hit2->aln, model)) return false;
  const bool use1 = hit1 && (!hit2 || hit1->aln.score >= hit2->aln.score);
  const MemberHit& good = use1 ? *hit1 : *hit2;
  std::optional<MemberHit>& other = use1 ? hit2 : hit1;
  const std::span<const std::uint8_t> mate = use1 ? end2 : end1;
  const auto len = static_cast<std::int64_t>(mate.size());
  const auto mean = static_cast<std::int64_t>(std::llround(model.mean));
  const auto slack = static_cast<std::int64_t>(std::ceil(5.0 * model.sd));

  std::int64_t mate_start = 0;
  if (good.aln.strand == Strand::Forward) {
    mate_start = good.aln.ref_start + mean - len;
  } else {
    mate_start = good.aln.ref_start + cigar_ref_span(good.aln.cigar) - mean;
  }
  const std::int64_t chrom_len = genome[good.aln.ref_id].length();
  const std::int64_t begin = std::max<std::int64_t>(0, mate_start - slack - len);
  const std::int64_t end = std::min(chrom_len, mate_start + len + slack + len);
  if (begin >= end) return false;

  const Strand strand = flip(good.aln.strand);
  const auto read = oriented(mate, strand);
  const LocalAlignment local =
      smith_waterman(read, genome.slice(good.aln.ref_id, begin, end), scheme);
  if (local.score < min_score(static_cast<int>(len))) return false;
  AlignmentResult rescued;
  rescued.mapped = true;
  rescued.score = local.score;
  rescued.ref_id = good.aln.ref_id;
  rescued.ref_start = begin + local.ref_begin;
  rescued.strand = strand;
  rescued.cigar = local.cigar;
  if (!concordant(good.aln, rescued, model)) return false;
  other = MemberHit{rescued, good.mapq, true};
  return true;
}

InsertModel estimate_insert(std::vector<std::int64_t> inserts) {
  if (inserts.size() < kMinInsertPairs) {
    throw Error("only " + std::to_string(inserts.size()) +
                " mapped anchor pairs to estimate the insert size (need " +
                std::to_string(kMinInsertPairs) + "); pass --insert-mean and --insert-sd");
  }
  auto median = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return (lo + hi) / 2.0;
  };
  std::vector<double> x(inserts.begin(), inserts.end());
  InsertModel m;
  m.mean = median(x);
  for (double& v : x) v = std::abs(v - m.mean);
  m.sd = std::max(1.0, 1.4826 * median(x));
  return m;
}

InsertModel estimate_insert(const AnchorSet& anchors, const ClusterTable& table) {
  std::vector<std::int64_t> inserts;
  for (std::size_t t = 0; t + 1 < table.rows.size(); t += 2) {
    const AnchorPlacement* a = anchors.find(static_cast<std::uint32_t>(t));
    const AnchorPlacement* b = anchors.find(static_cast<std::uint32_t>(t + 1));
    if (a == nullptr || b == nullptr || !a->mapped || !b->mapped) continue;
    if (a->ref_name != b->ref_name || a->strand == b->strand) continue;
    const std::int64_t end_a = a->pos + cigar_ref_span(a->cigar);
    const std::int64_t end_b = b->pos + cigar_ref_span(b->cigar);
    inserts.push_back(std::max(end_a, end_b) - std::min(a->pos, b->pos));
  }
  return estimate_insert(std::move(inserts));
}

// ---------------------------------------------------------------------------
// driver

namespace {

SamRecord read_record(const Read& read, bool paired, const std::optional<MemberHit>& hit,
                      const Genome& genome) {
  SamRecord r;
  r.qname = treq_qname(read.id(), paired);
  r.seq = read.sequence();
  r.qual.resize(read.length());
  for (int j = 0; j < read.length(); ++j) {
    r.qual[j] = static_cast<char>(std::min(read.quality(j), std::uint8_t{93}) + 33);
  }
  r.flag = 0;
  if (paired) r.flag |= sam_flag::kPaired | (read.id() % 2 == 0 ? sam_flag::kFirst : sam_flag::kSecond);
  if (!hit) {
    r.flag |= sam_flag::kUnmapped;
    return r;
  }
  const AlignmentResult& a = hit->aln;
  if (a.strand == Strand::Reverse) {
    r.flag |= sam_flag::kReverse;
    r.seq = reverse_complement(r.seq);
    std::reverse(r.qual.begin(), r.qual.end());
  }
  r.rname = genome[a.ref_id].name;
  r.pos = a.ref_start + 1;
  r.mapq = hit->mapq;
  r.cigar = a.cigar;
  r.tags.push_back("AS:i:" + std::to_string(a.score));
  return r;
}

void link_mates(SamRecord& r, const std::optional<MemberHit>& self,
                const std::optional<MemberHit>& mate, const Genome& genome, bool proper) {
  if (!mate) {
    r.flag |= sam_flag::kMateUnmapped;
    return;
  }
  if (mate->aln.strand == Strand::Reverse) r.flag |= sam_flag::kMateReverse;
  if (proper) r.flag |= sam_flag::kProperPair;
  r.rnext = self && self->aln.ref_id == mate->aln.ref_id ? "=" : genome[mate->aln.ref_id].name;
  r.pnext = mate->aln.ref_start + 1;
  if (self && self->aln.ref_id == mate->aln.ref_id) {
    const std::int64_t span = insert_size(self->aln, mate->aln);
    const bool leftmost = self->aln.ref_start < mate->aln.ref_start ||
                          (self->aln.ref_start == mate->aln.ref_start && (r.flag & sam_flag::kFirst));
    r.tlen = leftmost ? span : -span;
  }
}

}  // namespace

MapStats map_clusters(const Genome& genome, const ClusterTable& table,
                      const SubOptimalEdges& edges, const ReadLibrary& lib,
                      const AnchorSet& anchors, std::ostream& out, const MapOptions& options) {
  if (table.rows.size() != lib.size()) {
    throw Error("cluster table has " + std::to_string(table.rows.size()) + " reads, FASTQ input has " +
                std::to_string(lib.size()));
  }
  if (table.read_len != lib.read_length()) throw Error("cluster table read length differs from FASTQ input");
  if (table.paired != lib.paired()) throw Error("cluster table mode differs from the number of FASTQ files");

  MapStats stats;
  stats.reads = lib.size();
  const bool paired = table.paired;
  InsertModel model;
  if (paired) {
    model = options.insert ? *options.insert : estimate_insert(anchors, table);
    stats.insert = model;
  }

  for (const auto& h : anchors.header) out << h << '\n';
  out << "@PG\tID:treq-map\tPN:treq-map\tVN:0.3.0";
  if (!options.command_line.empty()) out << "\tCL:" << options.command_line;
  out << '\n';

  std::atomic<std::size_t> mapped{0}, unmapped{0}, bad{0}, sw{0}, rescued{0};
  const int len = lib.read_length();

  auto member_hit = [&](const Read& read, std::vector<std::uint8_t>& codes) {
    const Assignment& a = table.rows[read.id()];
    codes = read.codes(false);
    if (a.cls != ReadClass::Member) return std::optional<MemberHit>{};
    return finalize(search_suboptimal(codes, a, edges, anchors, genome, options.scheme), len);
  };
  auto count = [&](const Read& read, const std::optional<MemberHit>& hit) {
    const ReadClass c = table.rows[read.id()].cls;
    if (c == ReadClass::Bad) {
      ++bad;
    } else if (hit) {
      ++mapped;
      sw += hit->used_sw;
    } else {
      ++unmapped;
    }
  };

  const std::size_t unit = paired ? 2 : 1;
  const std::size_t units = lib.size() / unit;
  const std::size_t chunk = std::size_t{1} << 15;
  std::vector<std::string> lines;
  for (std::size_t b = 0; b < units; b += chunk) {
    const std::size_t e = std::min(units, b + chunk);
    lines.assign((e - b) * unit, {});
    parallel_for(e - b, options.threads, [&](std::size_t u, int) {
      const std::size_t first = (b + u) * unit;
      std::vector<std::uint8_t> codes[2];
      std::optional<MemberHit> hits[2];
      bool is_anchor[2] = {false, false};
      for (std::size_t m = 0; m < unit; ++m) {
        const Read read = lib[first + m];
        if (table.rows[first + m].cls == ReadClass::Anchor) {
          is_anchor[m] = true;
          lines[u * unit + m] = anchors.find(read.id())->raw;
          codes[m] = read.codes(false);
          continue;
        }
        hits[m] = member_hit(read, codes[m]);
      }
      if (!paired) {
        const Read read = lib[first];
        if (!is_anchor[0]) {
          count(read, hits[0]);
          lines[u] = format_sam(read_record(read, false, hits[0], genome));
        }
        return;
      }
      if (table.rows[first].cls == ReadClass::Member && table.rows[first + 1].cls == ReadClass::Member) {
        if (resolve_pair(codes[0], codes[1], hits[0], hits[1], model, genome, options.scheme)) {
          ++rescued;
        }
      }
      const bool proper = hits[0] && hits[1] && concordant(hits[0]->aln, hits[1]->aln, model);
      for (int m = 0; m < 2; ++m) {
        if (is_anchor[m]) continue;
        const Read read = lib[first + m];
        count(read, hits[m]);
        SamRecord r = read_record(read, true, hits[m], genome);
        if (!is_anchor[1 - m]) link_mates(r, hits[m], hits[1 - m], genome, proper);
        lines[u * unit + m] = format_sam(r);
      }
    }, 64);
    for (const auto& l : lines) out << l << '\n';
  }
  if (!out) throw Error("failed writing SAM output");

  stats.anchors = anchors.placements.size();
  stats.members_mapped = mapped;
  stats.members_unmapped = unmapped;
  stats.bad = bad;
  stats.smith_waterman = sw;
  stats.rescued = rescued;
  return stats;
}

}  // namespace treq
