#include "treq/genome.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "treq/common.hpp"

namespace treq {

void Genome::add(std::string name, std::string_view sequence) {
  if (by_name_.count(name) != 0) throw Error("duplicate sequence name " + name);
  by_name_.emplace(name, static_cast<int>(chroms_.size()));
  chroms_.push_back(Chromosome{std::move(name), encode(sequence)});
}

int Genome::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? -1 : it->second;
}

std::int64_t Genome::total_length() const {
  std::int64_t n = 0;
  for (const auto& c : chroms_) n += c.length();
  return n;
}

std::span<const std::uint8_t> Genome::slice(int ref, std::int64_t begin, std::int64_t end) const {
  const auto& c = chroms_.at(ref);
  begin = std::clamp<std::int64_t>(begin, 0, c.length());
  end = std::clamp<std::int64_t>(end, begin, c.length());
  return {c.codes.data() + begin, static_cast<std::size_t>(end - begin)};
}

Genome read_fasta(std::istream& in) {
  Genome g;
  std::string line, name, seq;
  bool open = false;
  auto flush = [&] {
    if (open) g.add(name, seq);
    seq.clear();
  };
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      const auto end = line.find_first_of(" \t", 1);
      name = line.substr(1, end == std::string::npos ? std::string::npos : end - 1);
      if (name.empty()) throw Error("FASTA line " + std::to_string(lineno) + ": empty name");
      open = true;
      continue;
    }
    if (!open) throw Error("FASTA line " + std::to_string(lineno) + ": sequence before header");
    seq += line;
  }
  flush();
  if (g.size() == 0) throw Error("FASTA input holds no sequences");
  return g;
}

Genome load_fasta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_fasta(in);
}

void write_fasta(std::ostream& out, const Genome& genome, int width) {
  for (std::size_t i = 0; i < genome.size(); ++i) {
    const auto& c = genome[i];
    out << '>' << c.name << '\n';
    for (std::size_t p = 0; p < c.codes.size(); p += width) {
      const std::size_t n = std::min<std::size_t>(width, c.codes.size() - p);
      out << decode(std::span(c.codes).subspan(p, n)) << '\n';
    }
  }
}

}  // namespace treq
