#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treq {

struct Chromosome {
  std::string name;
  std::vector<std::uint8_t> codes;  // A=0 C=1 G=2 T=3, others 4

  std::int64_t length() const { return static_cast<std::int64_t>(codes.size()); }
};

/// Multi-sequence reference held as base codes.
class Genome {
 public:
  Genome() = default;

  void add(std::string name, std::string_view sequence);
  std::size_t size() const { return chroms_.size(); }
  const Chromosome& operator[](std::size_t i) const { return chroms_[i]; }
  /// -1 when absent.
  int find(std::string_view name) const;
  std::int64_t total_length() const;

  /// Bases [begin, end) of chromosome `ref`, clamped to its bounds.
  std::span<const std::uint8_t> slice(int ref, std::int64_t begin, std::int64_t end) const;

 private:
  std::vector<Chromosome> chroms_;
  std::unordered_map<std::string, int> by_name_;
};

/// Sequence names are the first word of each header line.
Genome read_fasta(std::istream& in);
Genome load_fasta(const std::string& path);
void write_fasta(std::ostream& out, const Genome& genome, int width = 60);

}  // namespace treq
