#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "treq/cluster.hpp"

namespace treq {

namespace {

Strand parse_strand(const std::string& s, std::size_t line) {
  if (s == "+") return Strand::Forward;
  if (s == "-") return Strand::Reverse;
  throw Error("line " + std::to_string(line) + ": bad strand '" + s + "'");
}

ReadClass parse_class(const std::string& s, std::size_t line) {
  if (s == "A") return ReadClass::Anchor;
  if (s == "M") return ReadClass::Member;
  if (s == "B") return ReadClass::Bad;
  throw Error("line " + std::to_string(line) + ": bad class '" + s + "'");
}

std::string header_value(const std::string& header, const std::string& key) {
  const std::string tag = " " + key + "=";
  const auto at = header.find(tag);
  if (at == std::string::npos) throw Error("cluster table header lacks " + key);
  const auto begin = at + tag.size();
  return header.substr(begin, header.find(' ', begin) - begin);
}

}  // namespace

void write_cluster_table(std::ostream& out, const ClusterTable& table) {
  out << "#treq-cg v1 k=" << table.k << " alpha=" << format_real(table.alpha)
      << " beta=" << format_real(table.beta) << " mode=" << (table.paired ? "PE" : "SE")
      << " n_reads=" << table.rows.size() << " read_len=" << table.read_len << '\n';
  for (const Assignment& a : table.rows) {
    out << a.read_id << '\t' << class_char(a.cls) << '\t' << a.anchor_id << '\t' << a.shift
        << '\t' << strand_char(a.strand) << '\t' << a.overlap << '\t' << a.matches << '\n';
  }
}

ClusterTable read_cluster_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#treq-cg v1", 0) != 0) {
    throw Error("not a treq-cg v1 cluster table");
  }
  ClusterTable table;
  std::size_t n = 0;
  try {
    table.k = std::stoi(header_value(line, "k"));
    table.alpha = std::stod(header_value(line, "alpha"));
    table.beta = std::stod(header_value(line, "beta"));
    const std::string mode = header_value(line, "mode");
    if (mode != "SE" && mode != "PE") throw Error("unknown mode " + mode);
    table.paired = mode == "PE";
    n = std::stoull(header_value(line, "n_reads"));
    table.read_len = std::stoi(header_value(line, "read_len"));
  } catch (const std::logic_error&) {
    throw Error("malformed cluster table header");
  }
  table.rows.reserve(n);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    Assignment a;
    std::string cls, strand;
    if (!(row >> a.read_id >> cls >> a.anchor_id >> a.shift >> strand >> a.overlap >> a.matches)) {
      throw Error("cluster table line " + std::to_string(lineno) + ": malformed row");
    }
    a.cls = parse_class(cls, lineno);
    a.strand = parse_strand(strand, lineno);
    if (a.read_id != table.rows.size()) {
      throw Error("cluster table line " + std::to_string(lineno) + ": read ids out of order");
    }
    table.rows.push_back(a);
  }
  if (table.rows.size() != n) {
    throw Error("cluster table holds " + std::to_string(table.rows.size()) + " rows, header says " +
                std::to_string(n));
  }
  return table;
}

void write_edges(std::ostream& out, const SubOptimalEdges& edges) {
  auto dump = [&](char kind, const std::vector<std::vector<Edge>>& lists) {
    for (std::size_t src = 0; src < lists.size(); ++src) {
      for (const Edge& e : lists[src]) {
        out << kind << '\t' << src << '\t' << e.dst << '\t' << e.shift << '\t'
            << strand_char(e.strand) << '\n';
      }
    }
  };
  dump('M', edges.member);
  dump('A', edges.anchor);
}

SubOptimalEdges read_edges(std::istream& in, std::size_t n_reads) {
  SubOptimalEdges edges(n_reads);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string kind, strand;
    std::size_t src = 0;
    Edge e{};
    if (!(row >> kind >> src >> e.dst >> e.shift >> strand) || (kind != "M" && kind != "A")) {
      throw Error("edges line " + std::to_string(lineno) + ": malformed row");
    }
    if (src >= n_reads || e.dst >= n_reads) {
      throw Error("edges line " + std::to_string(lineno) + ": read id out of range");
    }
    e.strand = parse_strand(strand, lineno);
    (kind == "M" ? edges.member : edges.anchor)[src].push_back(e);
  }
  return edges;
}

}  // namespace treq
