#include <doctest.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "treq/readio.hpp"
#include "unit/helpers.hpp"

using namespace treq;

namespace {

std::string record(const std::string& name, const std::string& seq, const std::string& qual) {
  return "@" + name + "\n" + seq + "\n+\n" + qual + "\n";
}

std::string repeat(const std::string& s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += s;
  return out;
}

ReadLibrary one_read(const std::string& seq, const std::string& qual = {}) {
  ReadLibrary lib(static_cast<int>(seq.size()), false);
  lib.add(seq, qual.empty() ? std::string(seq.size(), 'I') : qual);
  return lib;
}

}  // namespace

TEST_SUITE("readio") {

TEST_CASE("high-quality record has no bad bases") {
  std::istringstream in(record("r", repeat("ACGT", 25), std::string(100, '!' + 40)));
  const ReadLibrary lib = parse_fastq(in);
  REQUIRE(lib.size() == 1);
  CHECK(lib.read_length() == 100);
  CHECK(lib[0].bad_count() == 0);
  CHECK(lib[0].sequence() == repeat("ACGT", 25));
}

TEST_CASE("N is bad regardless of quality") {
  std::string seq = repeat("ACGT", 25);
  seq[5] = 'N';
  std::istringstream in(record("r", seq, std::string(100, 'I')));
  const ReadLibrary lib = parse_fastq(in);
  CHECK(lib[0].is_bad(5));
  CHECK(lib[0].is_ambiguous(5));
  CHECK(lib[0].bad_count() == 1);
}

TEST_CASE("IUPAC codes other than N count as N") {
  std::string seq = repeat("ACGT", 10);
  seq[3] = 'R';
  const ReadLibrary lib = one_read(seq);
  CHECK(lib[0].is_ambiguous(3));
  CHECK(lib[0].sequence()[3] == 'N');
}

TEST_CASE("low quality marks a base bad, threshold inclusive of f") {
  std::string qual(40, 'I');
  qual[7] = '!' + 9;   // q9 < 10
  qual[8] = '!' + 10;  // q10 is fine
  const ReadLibrary lib = one_read(repeat("ACGT", 10), qual);
  CHECK(lib[0].is_bad(7));
  CHECK_FALSE(lib[0].is_bad(8));
  CHECK_FALSE(lib[0].is_ambiguous(7));
}

TEST_CASE("paired files interleave mates") {
  std::string a, b;
  for (int i = 0; i < 3; ++i) {
    a += record("p" + std::to_string(i), repeat("A", 40), std::string(40, 'I'));
    b += record("p" + std::to_string(i), repeat("C", 40), std::string(40, 'I'));
  }
  std::istringstream in1(a), in2(b);
  const ReadLibrary lib = parse_fastq_paired(in1, in2);
  REQUIRE(lib.size() == 6);
  CHECK(lib.paired());
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(lib[i].id() == i);
    CHECK(lib[i].sequence()[0] == (i % 2 == 0 ? 'A' : 'C'));
  }
}

TEST_CASE("mate files of unequal length are rejected") {
  std::istringstream in1(record("a", repeat("A", 40), std::string(40, 'I')) +
                         record("b", repeat("A", 40), std::string(40, 'I')));
  std::istringstream in2(record("a", repeat("A", 40), std::string(40, 'I')));
  CHECK_THROWS_AS(parse_fastq_paired(in1, in2), Error);
}

TEST_CASE("length mismatch names the record") {
  std::istringstream in(record("a", repeat("A", 40), std::string(40, 'I')) +
                        record("b", repeat("A", 41), std::string(41, 'I')));
  try {
    parse_fastq(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("record 2") != std::string::npos);
  }
}

TEST_CASE("malformed records are fatal") {
  std::istringstream no_plus("@a\n" + repeat("A", 40) + "\n" + std::string(40, 'I') + "\n");
  CHECK_THROWS_AS(parse_fastq(no_plus), Error);
  std::istringstream bad_header("a\n" + repeat("A", 40) + "\n+\n" + std::string(40, 'I') + "\n");
  CHECK_THROWS_AS(parse_fastq(bad_header), Error);
  std::istringstream short_qual(record("a", repeat("A", 40), std::string(39, 'I')));
  CHECK_THROWS_AS(parse_fastq(short_qual), Error);
}

TEST_CASE("reads shorter than 31 are fatal") {
  std::istringstream in(record("a", repeat("A", 30), std::string(30, 'I')));
  CHECK_THROWS_AS(parse_fastq(in), Error);
  CHECK_THROWS_AS(ReadLibrary(30, false), Error);
}

TEST_CASE("phred+64 offset") {
  ReadOptions opts;
  opts.phred_offset = 64;
  std::string qual(40, 'h');  // q40
  qual[0] = '@' + 5;
  std::istringstream in(record("a", repeat("ACGT", 10), qual));
  const ReadLibrary lib = parse_fastq(in, opts);
  CHECK(lib[0].quality(0) == 5);
  CHECK(lib[0].is_bad(0));
  CHECK(lib[0].quality(1) == 40);
}

TEST_CASE("gzip input") {
  const auto path = std::filesystem::temp_directory_path() / "treq_readio_test.fq.gz";
  const std::string text = record("a", repeat("ACGT", 10), std::string(40, 'I')) +
                           record("b", repeat("TTGA", 10), std::string(40, 'I'));
  gzFile f = gzopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  const ReadLibrary lib = load_library({path.string()});
  std::filesystem::remove(path);
  REQUIRE(lib.size() == 2);
  CHECK(lib[1].sequence() == repeat("TTGA", 10));
}

TEST_CASE("classify_bad_read examples") {
  SUBCASE("all N") { CHECK(classify_bad_read(one_read(std::string(36, 'N'))[0], 15)); }
  SUBCASE("bad ends only") {
    std::string s = repeat("ACGT", 9);
    s[0] = 'N';
    s[35] = 'N';
    CHECK_FALSE(classify_bad_read(one_read(s)[0], 15));
  }
  SUBCASE("bad every 8th base") {
    std::string s = repeat("ACGT", 9);
    for (int j = 0; j < 36; j += 8) s[j] = 'N';
    CHECK(classify_bad_read(one_read(s)[0], 15));
  }
  SUBCASE("span rule: good bases spanning fewer than 2k") {
    std::string s(36, 'N');
    for (int j = 3; j < 32; ++j) s[j] = "ACGT"[j % 4];  // 29 < 30
    CHECK(classify_bad_read(one_read(s)[0], 15));
    s[32] = 'A';  // 30
    CHECK_FALSE(classify_bad_read(one_read(s)[0], 15));
  }
  SUBCASE("run of exactly 8 passes at k=15") {
    std::string s = repeat("ACGT", 9);
    for (int j = 0; j < 36; j += 9) s[j] = 'N';  // runs of 8
    CHECK_FALSE(classify_bad_read(one_read(s)[0], 15));
  }
}

TEST_CASE("pack and unpack round-trip") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const int len = 31 + static_cast<int>(rng() % 170);
    std::string s = testutil::random_dna(rng, len);
    for (int j = 0; j < len; ++j) {
      if (rng() % 20 == 0) s[j] = 'N';
    }
    const ReadLibrary lib = one_read(s);
    CHECK(lib[0].sequence() == s);
    const auto unmasked = lib[0].codes(false);
    for (int j = 0; j < len; ++j) CHECK(unmasked[j] == encode_base(s[j]));
  }
}

TEST_CASE("adding a bad base never rescues a bad read") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 500; ++t) {
    const int len = 36 + static_cast<int>(rng() % 65);
    std::string s = testutil::random_dna(rng, len);
    for (int j = 0; j < len; ++j) {
      if (rng() % 6 == 0) s[j] = 'N';
    }
    const bool before = classify_bad_read(one_read(s)[0], 15);
    s[rng() % len] = 'N';
    const bool after = classify_bad_read(one_read(s)[0], 15);
    CHECK((!before || after));
  }
}

TEST_CASE("f = 0 without N leaves every read good") {
  ReadOptions opts;
  opts.quality_threshold = 0;
  std::mt19937_64 rng(2);
  ReadLibrary lib(50, false, opts);
  for (int t = 0; t < 100; ++t) lib.add(testutil::random_dna(rng, 50), std::string(50, '!'));
  for (std::size_t i = 0; i < lib.size(); ++i) CHECK_FALSE(classify_bad_read(lib[i], 15));
}

}  // TEST_SUITE
