#include "treq/readio.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

namespace treq {

// ---------------------------------------------------------------------------
// Read

void Read::unpack(std::span<std::uint8_t> out, bool mask_bad) const {
  for (int j = 0; j < len_; ++j) {
    const bool masked = mask_bad ? is_bad(j) : is_ambiguous(j);
    out[j] = masked ? kAmbiguous : base(j);
  }
}

std::vector<std::uint8_t> Read::codes(bool mask_bad) const {
  std::vector<std::uint8_t> out(len_);
  unpack(out, mask_bad);
  return out;
}

std::string Read::sequence() const {
  std::string out(len_, 'N');
  for (int j = 0; j < len_; ++j) {
    if (!is_ambiguous(j)) out[j] = "ACGT"[base(j)];
  }
  return out;
}

std::size_t Read::bad_count() const {
  std::size_t n = 0;
  for (int j = 0; j < len_; ++j) n += is_bad(j);
  return n;
}

// ---------------------------------------------------------------------------
// ReadLibrary

ReadLibrary::ReadLibrary(int read_len, bool paired, ReadOptions opts)
    : len_(read_len),
      seq_words_((read_len + 31) / 32),
      mask_words_((read_len + 63) / 64) {
  if (read_len < kMinReadLength) {
    throw Error("read length " + std::to_string(read_len) + " is below the minimum of " +
                std::to_string(kMinReadLength));
  }
  if (opts.phred_offset != 33 && opts.phred_offset != 64) {
    throw Error("phred offset must be 33 or 64");
  }
  if (opts.quality_threshold < 0) throw Error("quality threshold must be non-negative");
  meta_.read_len = read_len;
  meta_.paired = paired;
  meta_.phred_offset = opts.phred_offset;
  meta_.quality_threshold = opts.quality_threshold;
}

void ReadLibrary::add(std::string_view seq, std::string_view quals) {
  if (static_cast<int>(seq.size()) != len_) {
    throw Error("read " + std::to_string(n_) + " has length " + std::to_string(seq.size()) +
                ", expected " + std::to_string(len_));
  }
  if (!quals.empty() && quals.size() != seq.size()) {
    throw Error("read " + std::to_string(n_) + ": quality length differs from sequence length");
  }
  packed_.resize(packed_.size() + seq_words_, 0);
  n_mask_.resize(n_mask_.size() + mask_words_, 0);
  bad_mask_.resize(bad_mask_.size() + mask_words_, 0);
  qual_.resize(qual_.size() + len_, 0);
  std::uint64_t* pw = packed_.data() + n_ * seq_words_;
  std::uint64_t* nw = n_mask_.data() + n_ * mask_words_;
  std::uint64_t* bw = bad_mask_.data() + n_ * mask_words_;
  std::uint8_t* qw = qual_.data() + n_ * len_;
  for (int j = 0; j < len_; ++j) {
    const std::uint8_t code = encode_base(seq[j]);
    int q = 40;
    if (!quals.empty()) {
      q = static_cast<unsigned char>(quals[j]) - meta_.phred_offset;
      if (q < 0) {
        throw Error("read " + std::to_string(n_) + ": quality character below phred offset " +
                    std::to_string(meta_.phred_offset));
      }
    }
    qw[j] = static_cast<std::uint8_t>(std::min(q, 255));
    if (code == kAmbiguous) {
      nw[j >> 6] |= std::uint64_t{1} << (j & 63);
      bw[j >> 6] |= std::uint64_t{1} << (j & 63);
    } else {
      pw[j >> 5] |= std::uint64_t{code} << (2 * (j & 31));
      if (q < meta_.quality_threshold) bw[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }
  ++n_;
  meta_.n_reads = n_;
}

ReadLibrary ReadLibrary::from_sequences(const std::vector<std::string>& seqs, bool paired,
                                        ReadOptions opts) {
  if (seqs.empty()) throw Error("empty read set");
  ReadLibrary lib(static_cast<int>(seqs.front().size()), paired, opts);
  for (const auto& s : seqs) lib.add(s);
  return lib;
}

Read ReadLibrary::operator[](std::size_t i) const {
  Read r;
  r.id_ = static_cast<std::uint32_t>(i);
  r.len_ = len_;
  r.packed_ = packed_.data() + i * seq_words_;
  r.n_mask_ = n_mask_.data() + i * mask_words_;
  r.bad_mask_ = bad_mask_.data() + i * mask_words_;
  r.qual_ = qual_.data() + i * len_;
  return r;
}

// ---------------------------------------------------------------------------
// FastqReader

FastqReader::FastqReader(const std::string& path) : source_(path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw Error("cannot open " + path);
  gzbuffer(f, 1 << 17);
  gz_ = f;
  getline_ = [f](std::string& line) {
    line.clear();
    char buf[4096];
    while (true) {
      if (gzgets(f, buf, sizeof buf) == nullptr) return !line.empty();
      const std::size_t n = std::strlen(buf);
      line.append(buf, n);
      if (n > 0 && buf[n - 1] == '\n') break;
    }
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return true;
  };
}

FastqReader::FastqReader(std::istream& in) : source_("<stream>") {
  getline_ = [&in](std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
}

FastqReader::~FastqReader() {
  if (gz_ != nullptr) gzclose(static_cast<gzFile>(gz_));
}

bool FastqReader::getline(std::string& line) { return getline_(line); }

bool FastqReader::next(FastqRecord& rec) {
  std::string header;
  do {
    if (!getline(header)) return false;
  } while (header.empty());
  const std::size_t recno = count_ + 1;
  auto malformed = [&](const std::string& what) {
    return Error(source_ + ": malformed FASTQ record " + std::to_string(recno) + ": " + what);
  };
  if (header[0] != '@') throw malformed("header does not start with '@'");
  std::string plus;
  if (!getline(rec.seq)) throw malformed("missing sequence line");
  if (!getline(plus) || plus.empty() || plus[0] != '+') throw malformed("missing '+' line");
  if (!getline(rec.qual)) throw malformed("missing quality line");
  if (rec.qual.size() != rec.seq.size()) throw malformed("quality and sequence lengths differ");
  rec.name = header.substr(1);
  ++count_;
  return true;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

void check_length(const FastqRecord& rec, std::size_t recno, int expected, const std::string& src) {
  if (static_cast<int>(rec.seq.size()) != expected) {
    throw Error(src + ": record " + std::to_string(recno) + " has length " +
                std::to_string(rec.seq.size()) + ", expected " + std::to_string(expected));
  }
}

void check_min_length(const FastqRecord& rec, const std::string& src) {
  if (static_cast<int>(rec.seq.size()) < kMinReadLength) {
    throw Error(src + ": read length " + std::to_string(rec.seq.size()) +
                " is below the minimum of " + std::to_string(kMinReadLength));
  }
}

}  // namespace

ReadLibrary parse_fastq(FastqReader& in, ReadOptions opts) {
  FastqRecord rec;
  if (!in.next(rec)) throw Error(in.source() + ": no FASTQ records");
  check_min_length(rec, in.source());
  ReadLibrary lib(static_cast<int>(rec.seq.size()), false, opts);
  do {
    check_length(rec, in.records_read(), lib.read_length(), in.source());
    lib.add(rec.seq, rec.qual);
  } while (in.next(rec));
  return lib;
}

ReadLibrary parse_fastq_paired(FastqReader& mate1, FastqReader& mate2, ReadOptions opts) {
  FastqRecord r1, r2;
  const bool has1 = mate1.next(r1);
  const bool has2 = mate2.next(r2);
  if (!has1 || !has2) throw Error("paired input: empty mate file");
  check_min_length(r1, mate1.source());
  ReadLibrary lib(static_cast<int>(r1.seq.size()), true, opts);
  while (true) {
    check_length(r1, mate1.records_read(), lib.read_length(), mate1.source());
    check_length(r2, mate2.records_read(), lib.read_length(), mate2.source());
    lib.add(r1.seq, r1.qual);
    lib.add(r2.seq, r2.qual);
    const bool more1 = mate1.next(r1);
    const bool more2 = mate2.next(r2);
    if (more1 != more2) {
      throw Error("paired input: mate files have different record counts (" + mate1.source() +
                  ", " + mate2.source() + ")");
    }
    if (!more1) break;
  }
  return lib;
}

ReadLibrary parse_fastq(std::istream& in, ReadOptions opts) {
  FastqReader r(in);
  return parse_fastq(r, opts);
}

ReadLibrary parse_fastq_paired(std::istream& mate1, std::istream& mate2, ReadOptions opts) {
  FastqReader r1(mate1), r2(mate2);
  return parse_fastq_paired(r1, r2, opts);
}

ReadLibrary load_library(const std::vector<std::string>& paths, ReadOptions opts) {
  if (paths.size() == 1) {
    FastqReader r(paths[0]);
    return parse_fastq(r, opts);
  }
  if (paths.size() == 2) {
    FastqReader r1(paths[0]), r2(paths[1]);
    return parse_fastq_paired(r1, r2, opts);
  }
  throw Error("expected one or two FASTQ files");
}

bool classify_bad_read(const Read& read, int k) {
  const int len = read.length();
  int first = -1, last = -1, run = 0, best_run = 0;
  for (int j = 0; j < len; ++j) {
    if (read.is_bad(j)) {
      run = 0;
      continue;
    }
    if (first < 0) first = j;
    last = j;
    best_run = std::max(best_run, ++run);
  }
  if (first < 0) return true;
  if (last - first + 1 < 2 * k) return true;
  return 2 * best_run < k;  // strictly shorter than k/2
}

}  // namespace treq
