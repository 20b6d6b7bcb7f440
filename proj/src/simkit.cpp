#include "treq/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "treq/align.hpp"
#include "treq/sam.hpp"

namespace treq {

void SimParams::validate() const {
  if (read_len < kMinReadLength) throw Error("read length must be at least 31");
  if (genome_len < read_len) throw Error("genome shorter than the read length");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error("epsilon must be in [0, 1)");
  if (n_reads < 0 || coverage < 0) throw Error("read count and coverage must be non-negative");
  if (paired) {
    if (genome_len < 2 * read_len) throw Error("paired simulation needs G >= 2L");
    if (!(insert_sd >= 0.0)) throw Error("insert sd must be non-negative");
  }
}

std::int64_t SimParams::read_count() const {
  std::int64_t n = n_reads > 0 ? n_reads : std::llround(coverage * genome_len / read_len);
  if (paired) n -= n % 2;
  return n;
}

ReadLibrary SimulatedReads::library(ReadOptions opts) const {
  if (seqs.empty()) throw Error("empty simulation");
  ReadLibrary lib(static_cast<int>(seqs.front().size()), paired, opts);
  for (const auto& s : seqs) lib.add(s);
  return lib;
}

std::string generate_genome(std::int64_t length, std::uint64_t seed) {
  if (length < 1) throw Error("genome length must be positive");
  std::mt19937_64 rng(seed);
  std::string g(static_cast<std::size_t>(length), 'A');
  for (auto& c : g) c = "ACGT"[rng() >> 62];
  return g;
}

std::string generate_genome(const SimParams& params) {
  if (params.genome_len < params.read_len) throw Error("genome shorter than the read length");
  return generate_genome(params.genome_len, params.seed);
}

SimulatedReads sample_reads(const std::string& genome, const SimParams& p) {
  p.validate();
  const auto g = static_cast<std::int64_t>(genome.size());
  if (g < p.read_len) throw Error("genome shorter than the read length");
  const int len = p.read_len;
  // Separate stream from the genome's so the two can be varied independently.
  std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> other(1, 3);
  std::bernoulli_distribution coin(0.5);

  auto corrupt = [&](std::string& s) {
    if (p.epsilon <= 0.0) return;
    for (auto& c : s) {
      if (unit(rng) < p.epsilon) c = "ACGT"[(encode_base(c) + other(rng)) % 4];
    }
  };
  auto window = [&](std::int64_t pos, Strand strand) {
    std::string s = genome.substr(static_cast<std::size_t>(pos), len);
    return strand == Strand::Forward ? s : reverse_complement(s);
  };

  SimulatedReads out;
  out.paired = p.paired;
  const std::int64_t n = p.read_count();
  out.seqs.reserve(n);
  out.truth.reserve(n);
  if (!p.paired) {
    std::uniform_int_distribution<std::int64_t> start(0, g - len);
    for (std::int64_t i = 0; i < n; ++i) {
      TruthRecord t;
      t.read_id = static_cast<std::uint64_t>(i);
      t.pos = start(rng);
      t.strand = coin(rng) ? Strand::Reverse : Strand::Forward;
      std::string s = window(t.pos, t.strand);
      corrupt(s);
      out.seqs.push_back(std::move(s));
      out.truth.push_back(t);
    }
    return out;
  }
  std::normal_distribution<double> insert_dist(p.insert_mean, p.insert_sd);
  for (std::int64_t t = 0; t < n / 2; ++t) {
    std::int64_t insert = 0;
    for (int tries = 0;; ++tries) {
      insert = std::llround(insert_dist(rng));
      if (insert >= 2 * len && insert <= g) break;
      if (tries > 1000) throw Error("insert distribution incompatible with [2L, G]");
    }
    const std::int64_t frag = std::uniform_int_distribution<std::int64_t>(0, g - insert)(rng);
    const bool forward = !coin(rng);
    TruthRecord m1, m2;
    m1.read_id = 2 * t;
    m2.read_id = 2 * t + 1;
    m1.mate_id = static_cast<std::int64_t>(m2.read_id);
    m2.mate_id = static_cast<std::int64_t>(m1.read_id);
    m1.insert = m2.insert = insert;
    const std::int64_t left = frag, right = frag + insert - len;
    m1.pos = forward ? left : right;
    m1.strand = forward ? Strand::Forward : Strand::Reverse;
    m2.pos = forward ? right : left;
    m2.strand = flip(m1.strand);
    for (TruthRecord* m : {&m1, &m2}) {
      std::string s = window(m->pos, m->strand);
      corrupt(s);
      out.seqs.push_back(std::move(s));
      out.truth.push_back(*m);
    }
  }
  return out;
}

void write_fastq(std::ostream& out, const SimulatedReads& reads, int mate) {
  for (std::size_t i = 0; i < reads.seqs.size(); ++i) {
    if (mate != 0 && static_cast<int>(i % 2) != mate - 1) continue;
    const std::size_t name = reads.paired ? i & ~std::size_t{1} : i;
    const std::string& s = reads.seqs[i];
    out << '@' << name << '\n' << s << "\n+\n" << std::string(s.size(), 'I') << '\n';
  }
}

void write_truth(std::ostream& out, const std::vector<TruthRecord>& truth) {
  out << "#read_id\tref\tpos\tstrand\tmate_id\tinsert\n";
  for (const auto& t : truth) {
    out << t.read_id << '\t' << t.ref << '\t' << t.pos << '\t' << strand_char(t.strand) << '\t'
        << t.mate_id << '\t' << t.insert << '\n';
  }
}

std::vector<TruthRecord> read_truth(std::istream& in) {
  std::vector<TruthRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    TruthRecord t;
    std::string strand;
    if (!(row >> t.read_id >> t.ref >> t.pos >> strand >> t.mate_id >> t.insert) ||
        (strand != "+" && strand != "-")) {
      throw Error("truth line " + std::to_string(lineno) + ": malformed row");
    }
    t.strand = strand == "+" ? Strand::Forward : Strand::Reverse;
    if (t.read_id != out.size()) throw Error("truth line " + std::to_string(lineno) + ": ids out of order");
    out.push_back(t);
  }
  return out;
}

void oracle_place_anchors(std::ostream& out, const ClusterTable& table,
                          const std::vector<TruthRecord>& truth, const ReadLibrary& lib,
                          std::int64_t genome_len) {
  if (truth.size() != table.rows.size() || lib.size() != table.rows.size()) {
    throw Error("truth, library and cluster table sizes differ");
  }
  out << "@HD\tVN:1.6\tSO:unsorted\n@SQ\tSN:" << kSimRefName << "\tLN:" << genome_len
      << "\n@PG\tID:treq-sim-oracle\tPN:treq-sim\n";
  const int len = table.read_len;
  for (const Assignment& a : table.rows) {
    if (a.cls != ReadClass::Anchor) continue;
    const TruthRecord& t = truth[a.read_id];
    const Read read = lib[a.read_id];
    SamRecord r;
    r.qname = treq_qname(a.read_id, table.paired);
    r.flag = 0;
    r.rname = t.ref;
    r.pos = t.pos + 1;
    r.mapq = 60;
    r.cigar = std::to_string(len) + "M";
    r.seq = read.sequence();
    r.qual.assign(len, 'I');
    if (t.strand == Strand::Reverse) {
      r.flag |= sam_flag::kReverse;
      r.seq = reverse_complement(r.seq);
    }
    if (table.paired) {
      r.flag |= sam_flag::kPaired | (a.read_id % 2 == 0 ? sam_flag::kFirst : sam_flag::kSecond);
      const std::uint32_t mate = a.read_id ^ 1u;
      if (table.rows[mate].cls == ReadClass::Anchor) {
        const TruthRecord& m = truth[mate];
        r.flag |= sam_flag::kProperPair;
        if (m.strand == Strand::Reverse) r.flag |= sam_flag::kMateReverse;
        r.rnext = "=";
        r.pnext = m.pos + 1;
        const std::int64_t span = std::max(t.pos, m.pos) + len - std::min(t.pos, m.pos);
        r.tlen = t.pos < m.pos || (t.pos == m.pos && a.read_id % 2 == 0) ? span : -span;
      } else {
        r.flag |= sam_flag::kMateUnmapped;
      }
    }
    out << format_sam(r) << '\n';
  }
}

std::vector<std::optional<SamCall>> load_calls(std::istream& in, std::size_t n_reads) {
  std::vector<std::optional<SamCall>> calls(n_reads);
  const bool grow = n_reads == 0;
  SamReader reader(in);
  SamRecord rec;
  while (reader.next(rec)) {
    if (!rec.primary()) continue;
    const std::string where = "SAM line " + std::to_string(reader.line_number());
    const auto id = read_id_from_record(rec.qname, rec.flag);
    if (!id) throw Error(where + ": query name '" + rec.qname + "' carries no read id");
    if (grow && *id >= calls.size()) calls.resize(*id + 1);
    if (*id >= calls.size()) throw Error(where + ": read id " + std::to_string(*id) + " out of range");
    if (calls[*id]) throw Error(where + ": duplicate primary record for read " + std::to_string(*id));
    SamCall c;
    c.mapped = rec.mapped();
    c.mapq = rec.mapq;
    if (c.mapped) {
      c.ref = rec.rname;
      c.pos = rec.pos - 1;
      c.end = c.pos + (rec.cigar == "*" ? 0 : cigar_ref_span(rec.cigar));
      c.strand = rec.flag & sam_flag::kReverse ? Strand::Reverse : Strand::Forward;
    }
    calls[*id] = std::move(c);
  }
  return calls;
}

double accuracy(const std::vector<std::optional<SamCall>>& calls,
                const std::vector<TruthRecord>& truth, int read_len,
                const std::vector<bool>* include) {
  std::size_t total = 0, hit = 0;
  for (const auto& t : truth) {
    if (include != nullptr && !(*include)[t.read_id]) continue;
    ++total;
    if (t.read_id >= calls.size() || !calls[t.read_id]) continue;
    const SamCall& c = *calls[t.read_id];
    if (c.mapped && c.ref == t.ref && std::llabs(c.pos - t.pos) <= read_len) ++hit;
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / total;
}

double alternate_mapping_rate(const std::vector<std::optional<SamCall>>& a,
                              const std::vector<std::optional<SamCall>>& b, int mapq_threshold,
                              int read_len) {
  if (a.size() != b.size()) throw Error("SAM inputs cover different read sets");
  std::size_t n = 0, alt = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].has_value() != b[i].has_value()) {
      throw Error("read " + std::to_string(i) + " appears in only one SAM input");
    }
    if (!a[i]) continue;
    ++n;
    const bool ma = a[i]->mapped && a[i]->mapq >= mapq_threshold;
    const bool mb = b[i]->mapped && b[i]->mapq >= mapq_threshold;
    if (ma != mb) {
      ++alt;
    } else if (ma && (a[i]->ref != b[i]->ref || std::llabs(a[i]->pos - b[i]->pos) > read_len)) {
      ++alt;
    }
  }
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(alt) / n;
}

double concordance(const std::vector<std::optional<SamCall>>& calls, const InsertModel& model) {
  std::size_t pairs = 0, good = 0;
  for (std::size_t t = 0; t + 1 < calls.size(); t += 2) {
    ++pairs;
    const auto& a = calls[t];
    const auto& b = calls[t + 1];
    if (!a || !b || !a->mapped || !b->mapped) continue;
    if (a->ref != b->ref || a->strand == b->strand) continue;
    const auto insert = static_cast<double>(std::max(a->end, b->end) - std::min(a->pos, b->pos));
    if (insert >= model.mean - 5.0 * model.sd && insert <= model.mean + 5.0 * model.sd) ++good;
  }
  return pairs == 0 ? 0.0 : static_cast<double>(good) / pairs;
}

}  // namespace treq
