#include "treq/sam.hpp"

#include <charconv>

#include "treq/common.hpp"

namespace treq {

namespace {

template <class T>
T parse_int(std::string_view field, const char* what, std::size_t lineno) {
  T v{};
  const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw Error("SAM line " + std::to_string(lineno) + ": bad " + what + " '" +
                std::string(field) + "'");
  }
  return v;
}

}  // namespace

SamRecord parse_sam_line(std::string_view line, std::size_t lineno) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    f.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (f.size() < 11) {
    throw Error("SAM line " + std::to_string(lineno) + ": expected 11 fields, found " +
                std::to_string(f.size()));
  }
  SamRecord r;
  r.qname = f[0];
  r.flag = parse_int<int>(f[1], "FLAG", lineno);
  r.rname = f[2];
  r.pos = parse_int<std::int64_t>(f[3], "POS", lineno);
  r.mapq = parse_int<int>(f[4], "MAPQ", lineno);
  r.cigar = f[5];
  r.rnext = f[6];
  r.pnext = parse_int<std::int64_t>(f[7], "PNEXT", lineno);
  r.tlen = parse_int<std::int64_t>(f[8], "TLEN", lineno);
  r.seq = f[9];
  r.qual = f[10];
  for (std::size_t i = 11; i < f.size(); ++i) r.tags.emplace_back(f[i]);
  return r;
}

std::string format_sam(const SamRecord& r) {
  std::string out;
  out.reserve(64 + r.seq.size() * 2);
  auto field = [&](std::string_view v) {
    out += v;
    out.push_back('\t');
  };
  field(r.qname);
  field(std::to_string(r.flag));
  field(r.rname);
  field(std::to_string(r.pos));
  field(std::to_string(r.mapq));
  field(r.cigar);
  field(r.rnext);
  field(std::to_string(r.pnext));
  field(std::to_string(r.tlen));
  field(r.seq);
  out += r.qual;
  for (const auto& t : r.tags) {
    out.push_back('\t');
    out += t;
  }
  return out;
}

SamReader::SamReader(std::istream& in) : in_(in) {
  std::string line;
  while (std::getline(in_, line)) {
    ++lineno_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '@') {
      header_.push_back(line);
      continue;
    }
    pending_ = std::move(line);
    has_pending_ = true;
    break;
  }
}

bool SamReader::next(SamRecord& rec, std::string* raw) {
  std::string line;
  if (has_pending_) {
    line = std::move(pending_);
    has_pending_ = false;
  } else {
    while (true) {
      if (!std::getline(in_, line)) return false;
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) break;
    }
    if (line[0] == '@') {
      throw Error("SAM line " + std::to_string(lineno_) + ": header line after records");
    }
  }
  rec = parse_sam_line(line, lineno_);
  if (raw != nullptr) *raw = std::move(line);
  return true;
}

std::optional<std::uint64_t> read_id_from_record(std::string_view qname, int flag) {
  if (qname.rfind("treq:", 0) == 0) qname.remove_prefix(5);
  if (qname.size() > 2 && qname[qname.size() - 2] == '/' &&
      (qname.back() == '1' || qname.back() == '2')) {
    qname.remove_suffix(2);
  }
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(qname.data(), qname.data() + qname.size(), v);
  if (qname.empty() || ec != std::errc() || p != qname.data() + qname.size()) return std::nullopt;
  if ((flag & sam_flag::kPaired) && (flag & sam_flag::kSecond)) ++v;
  return v;
}

std::string treq_qname(std::uint64_t read_id, bool paired) {
  return "treq:" + std::to_string(paired ? read_id & ~std::uint64_t{1} : read_id);
}

}  // namespace treq
