#include <doctest.h>

#include <set>

#include "oracles/reference_cluster.hpp"
#include "treq/cluster.hpp"
#include "treq/simkit.hpp"
#include "unit/helpers.hpp"

using namespace treq;
using testutil::random_dna;

namespace {

ClusterParams params_for(int len) {
  ClusterParams p = ClusterParams::for_read_length(len);
  return p;
}

ReadLibrary lib_of(const std::vector<std::string>& seqs, bool paired = false) {
  return ReadLibrary::from_sequences(seqs, paired);
}

/// Reads from a random genome with substitution errors.
SimulatedReads simulate(std::uint64_t seed, std::int64_t genome_len, int len, std::int64_t n,
                        double eps, bool paired) {
  SimParams sp;
  sp.genome_len = genome_len;
  sp.read_len = len;
  sp.n_reads = n;
  sp.epsilon = eps;
  sp.paired = paired;
  sp.insert_mean = 3.0 * len;
  sp.insert_sd = 0.1 * len;
  sp.seed = seed;
  return sample_reads(generate_genome(genome_len, seed), sp);
}

void check_invariants(const ClusterResult& res, const ReadLibrary& lib, const ClusterParams& p) {
  const int len = lib.read_length();
  const auto& rows = res.table.rows;
  REQUIRE(rows.size() == lib.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Assignment& a = rows[i];
    REQUIRE(a.read_id == i);
    switch (a.cls) {
      case ReadClass::Bad:
        CHECK(a.anchor_id == -1);
        break;
      case ReadClass::Anchor:
        CHECK(a.anchor_id == static_cast<std::int64_t>(i));
        CHECK(a.shift == 0);
        CHECK(a.strand == Strand::Forward);
        break;
      case ReadClass::Member: {
        REQUIRE(a.anchor_id >= 0);
        REQUIRE(rows[a.anchor_id].cls == ReadClass::Anchor);
        const auto ov = overlap_similarity(lib[a.anchor_id], lib[i], a.shift, a.strand);
        REQUIRE(ov.has_value());
        CHECK(ov->length == a.overlap);
        CHECK(ov->matches == a.matches);
        CHECK(a.overlap == len - std::abs(a.shift));
        const int min_l = a.forced ? p.min_paired_overlap(len) : p.min_overlap(len);
        CHECK(a.overlap >= min_l);
        CHECK(a.matches >= ceil_threshold(p.beta * a.overlap));
        break;
      }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(res.edges.member[i].size() <= p.max_member_edges);
    CHECK(res.edges.anchor[i].size() <= p.max_anchor_edges);
    for (const Edge& e : res.edges.member[i]) {
      CHECK(rows[i].cls == ReadClass::Member);
      CHECK(static_cast<std::int64_t>(e.dst) != rows[i].anchor_id);
      CHECK(rows[e.dst].cls == ReadClass::Anchor);
      const auto ov = overlap_similarity(lib[e.dst], lib[i], e.shift, e.strand);
      REQUIRE(ov.has_value());
      CHECK(ov->length >= p.min_overlap(len));
      CHECK(ov->matches >= ceil_threshold(p.beta_prime * ov->length));
    }
    for (const Edge& e : res.edges.anchor[i]) {
      CHECK(rows[i].cls == ReadClass::Anchor);
      CHECK(rows[e.dst].cls == ReadClass::Anchor);
      const auto ov = overlap_similarity(lib[e.dst], lib[i], e.shift, e.strand);
      REQUIRE(ov.has_value());
      CHECK(ov->length >= p.min_overlap(len));
      CHECK(ov->matches >= ceil_threshold(p.beta_prime * ov->length));
    }
  }
  if (res.table.paired) {
    for (std::size_t t = 0; 2 * t + 1 < rows.size(); ++t) {
      const auto c1 = rows[2 * t].cls, c2 = rows[2 * t + 1].cls;
      const bool mixed = (c1 == ReadClass::Anchor && c2 == ReadClass::Member) ||
                         (c1 == ReadClass::Member && c2 == ReadClass::Anchor);
      CHECK_FALSE(mixed);
    }
  }
}

/// Strongest exact placement of y against x found by brute force.
std::optional<std::pair<int, Strand>> exact_relation(const std::string& anchor,
                                                     const std::string& member, int min_l) {
  const int len = static_cast<int>(anchor.size());
  const auto a = encode(anchor);
  std::optional<std::pair<int, Strand>> best;
  int best_l = 0;
  for (Strand s : {Strand::Forward, Strand::Reverse}) {
    auto m = encode(member);
    if (s == Strand::Reverse) m = reverse_complement(m);
    for (int shift = -(len - min_l); shift <= len - min_l; ++shift) {
      const Overlap ov = overlap_similarity(a, m, shift);
      if (ov.matches == ov.length && ov.length > best_l) {
        best_l = ov.length;
        best = std::pair{shift, s};
      }
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("overlap_similarity examples") {
  std::mt19937_64 rng(1);
  const std::string a = random_dna(rng, 36);
  const auto lib = lib_of({a, a, a.substr(18) + a.substr(0, 18)});
  CHECK(*overlap_similarity(lib[0], lib[1], 0, Strand::Forward) == Overlap{36, 36});
  // Read 2 starts with a[18..36): its base j pairs with a[j + 18].
  CHECK(*overlap_similarity(lib[0], lib[2], 18, Strand::Forward) == Overlap{18, 18});
  CHECK_FALSE(overlap_similarity(lib[0], lib[1], 36, Strand::Forward).has_value());

  const std::string b = a.substr(5) + random_dna(rng, 5);
  const auto lib2 = lib_of({a, testutil::mutate(b, 15)});
  const auto ov = *overlap_similarity(lib2[0], lib2[1], 5, Strand::Forward);
  CHECK(ov == Overlap{31, 30});
  CHECK(ov.similarity() == doctest::Approx(30.0 / 31.0));
  CHECK(ov.matches >= ceil_threshold(0.95 * 31));
}

TEST_CASE("overlap_similarity counts bad bases as mismatches on either side") {
  std::mt19937_64 rng(2);
  std::string a = random_dna(rng, 40);
  std::string b = a;
  a[3] = 'N';
  b[7] = 'N';
  const auto lib = lib_of({a, b});
  CHECK(overlap_similarity(lib[0], lib[1], 0, Strand::Forward)->matches == 38);
  ReadOptions opts;
  ReadLibrary q(40, false, opts);
  std::string qual(40, 'I');
  qual[10] = '!' + 2;
  q.add(random_dna(rng, 40), qual);
  q.add(q[0].sequence(), std::string(40, 'I'));
  CHECK(overlap_similarity(q[1], q[0], 0, Strand::Forward)->matches == 39);
}

TEST_CASE("reverse strand compares against the reverse complement") {
  std::mt19937_64 rng(3);
  const std::string a = random_dna(rng, 50);
  const auto lib = lib_of({a, reverse_complement(a)});
  CHECK(overlap_similarity(lib[0], lib[1], 0, Strand::Reverse)->matches == 50);
  CHECK(overlap_similarity(lib[0], lib[1], 0, Strand::Forward)->matches < 30);
}

TEST_CASE("try_assign: identical read joins the prior anchor") {
  std::mt19937_64 rng(4);
  const std::string a = random_dna(rng, 100);
  const auto lib = lib_of({a, a});
  const auto p = params_for(100);
  ClusterState state(lib, p);
  state.add_anchor(lib[0], p.alpha);
  const auto m = try_assign(lib[1], state.index, state.anchors, p);
  REQUIRE(m.has_value());
  CHECK(m->anchor_id == 0);
  CHECK(m->shift == 0);
  CHECK(m->strand == Strand::Forward);
  CHECK(m->matches == 100);
}

TEST_CASE("try_assign: 31-base overlap with a central error") {
  std::mt19937_64 rng(5);
  const std::string a = random_dna(rng, 36);
  const std::string b = testutil::mutate(a.substr(5) + random_dna(rng, 5), 15);
  const auto lib = lib_of({a, b});
  ClusterParams p = params_for(36);
  CHECK(p.min_overlap(36) == 31);
  ClusterState state(lib, p);
  state.add_anchor(lib[0], p.alpha);
  const auto m = try_assign(lib[1], state.index, state.anchors, p);
  REQUIRE(m.has_value());
  CHECK(m->shift == 5);
  CHECK(m->overlap == 31);
  CHECK(m->matches == 30);
}

TEST_CASE("try_assign: a single shared k-mer is never evaluated") {
  std::mt19937_64 rng(6);
  const std::string a = random_dna(rng, 36);
  // Errors at 15 and 30 leave window 0 as the only shared 15-mer.
  const std::string b = testutil::mutate(testutil::mutate(a, 15), 30);
  const auto lib = lib_of({a, b});
  ClusterParams p = params_for(36);
  p.beta = 0.9;
  ClusterState state(lib, p);
  state.add_anchor(lib[0], p.alpha);
  const auto ov = overlap_similarity(lib[0], lib[1], 0, Strand::Forward);
  CHECK(ov->matches >= ceil_threshold(p.beta * 36));  // would qualify if evaluated
  CHECK_FALSE(try_assign(lib[1], state.index, state.anchors, p).has_value());
}

TEST_CASE("try_assign: reverse complement is found after the forward pass") {
  std::mt19937_64 rng(7);
  const std::string a = random_dna(rng, 100);
  const auto lib = lib_of({a, reverse_complement(a.substr(10) + random_dna(rng, 10))});
  const auto p = params_for(100);
  ClusterState state(lib, p);
  state.add_anchor(lib[0], p.alpha);
  const auto m = try_assign(lib[1], state.index, state.anchors, p);
  REQUIRE(m.has_value());
  CHECK(m->strand == Strand::Reverse);
  CHECK(m->shift == 10);
  CHECK(m->overlap == 90);
}

TEST_CASE("single-end examples") {
  std::mt19937_64 rng(8);
  SUBCASE("identical copies") {
    const std::string a = random_dna(rng, 100);
    const auto lib = lib_of(std::vector<std::string>(25, a));
    const auto res = cluster_library(lib, params_for(100));
    CHECK(res.table.count(ReadClass::Anchor) == 1);
    CHECK(res.table.count(ReadClass::Member) == 24);
    CHECK(res.table.rows[0].cls == ReadClass::Anchor);
    CHECK(res.edges.member_edge_count() == 0);  // similar only to its own anchor
  }
  SUBCASE("unrelated reads") {
    std::vector<std::string> seqs;
    for (int i = 0; i < 50; ++i) seqs.push_back(random_dna(rng, 100));
    const auto res = cluster_library(lib_of(seqs), params_for(100));
    CHECK(res.table.count(ReadClass::Anchor) == 50);
  }
  SUBCASE("bad reads") {
    const auto lib = lib_of({std::string(100, 'N'), random_dna(rng, 100)});
    const auto res = cluster_library(lib, params_for(100));
    CHECK(res.table.rows[0] == Assignment::bad(0));
    CHECK(res.table.rows[1].cls == ReadClass::Anchor);
  }
}

TEST_CASE("paired-end: both ends copy a prior anchor pair") {
  std::mt19937_64 rng(9);
  const std::string a1 = random_dna(rng, 100), a2 = random_dna(rng, 100);
  ClusterParams p = params_for(100);
  p.paired = true;
  const auto res = cluster_library(lib_of({a1, a2, a1, a2}, true), p);
  const auto& r = res.table.rows;
  CHECK(r[0].cls == ReadClass::Anchor);
  CHECK(r[1].cls == ReadClass::Anchor);
  CHECK(r[2].cls == ReadClass::Member);
  CHECK(r[2].anchor_id == 0);
  CHECK(r[3].anchor_id == 1);
}

TEST_CASE("paired-end: relaxed overlap against the partner anchor forces membership") {
  std::mt19937_64 rng(10);
  const std::string a1 = random_dna(rng, 100), a2 = random_dna(rng, 100);
  const std::string end1 = a1.substr(60) + random_dna(rng, 60);  // 40-base overlap < 50
  ClusterParams p = params_for(100);
  p.paired = true;
  const auto lib = lib_of({a1, a2, end1, a2}, true);
  const auto res = cluster_paired_end(lib, p);
  const auto& r = res.table.rows;
  REQUIRE(r[2].cls == ReadClass::Member);
  CHECK(r[2].anchor_id == 0);
  CHECK(r[2].shift == 60);
  CHECK(r[2].overlap == 40);
  CHECK(r[2].forced);
  CHECK(r[3].anchor_id == 1);

  // Forced members survive phase 2 and still satisfy the relaxed bound.
  ClusterResult full = cluster_library(lib, p);
  CHECK(full.table.rows[2] == r[2]);
  check_invariants(full, lib, p);
}

TEST_CASE("paired-end: failed relaxed overlap turns both ends into anchors") {
  std::mt19937_64 rng(11);
  const std::string a1 = random_dna(rng, 100), a2 = random_dna(rng, 100);
  ClusterParams p = params_for(100);
  p.paired = true;
  const auto lib = lib_of({a1, a2, random_dna(rng, 100), a2}, true);
  const auto res = cluster_paired_end(lib, p);
  const auto& r = res.table.rows;
  CHECK(r[2].cls == ReadClass::Anchor);
  CHECK(r[3].cls == ReadClass::Anchor);
  // The would-be member keeps a link to its former anchor, in both directions.
  REQUIRE_FALSE(res.edges.anchor[3].empty());
  CHECK(res.edges.anchor[3].front() == Edge{1, 0, Strand::Forward});
  CHECK(std::count(res.edges.anchor[1].begin(), res.edges.anchor[1].end(),
                   Edge{3, 0, Strand::Forward}) == 1);
}

TEST_CASE("paired-end: bad ends") {
  std::mt19937_64 rng(12);
  const std::string a1 = random_dna(rng, 100), a2 = random_dna(rng, 100);
  const std::string bad(100, 'N');
  ClusterParams p = params_for(100);
  p.paired = true;
  const auto res = cluster_paired_end(lib_of({a1, a2, bad, bad, bad, a1, random_dna(rng, 100), bad},
                                             true), p);
  const auto& r = res.table.rows;
  CHECK(r[2].cls == ReadClass::Bad);
  CHECK(r[3].cls == ReadClass::Bad);
  CHECK(r[4].cls == ReadClass::Bad);  // a bad mate of a member stays bad
  CHECK(r[5].cls == ReadClass::Member);
  CHECK(r[6].cls == ReadClass::Anchor);
  CHECK(r[7].cls == ReadClass::Anchor);  // a bad mate of an anchor goes with it
}

TEST_CASE("phase 2: member at full overlap is unchanged") {
  std::mt19937_64 rng(13);
  const std::string a = random_dna(rng, 100);
  const auto lib = lib_of({a, a, random_dna(rng, 100)});
  const auto p = params_for(100);
  const auto res = cluster_single_end(lib, p);
  const auto after = reassign_optimal(res.table, lib, res.state, p);
  CHECK(after.rows == res.table.rows);
}

TEST_CASE("phase 2: member moves to a later anchor with a longer overlap") {
  std::mt19937_64 rng(14);
  const std::string g = random_dna(rng, 300);
  const auto lib = lib_of({g.substr(0, 100), g.substr(50, 100), g.substr(70, 100)});
  const auto p = params_for(100);
  const auto res = cluster_single_end(lib, p);
  REQUIRE(res.table.rows[1].anchor_id == 0);
  REQUIRE(res.table.rows[1].overlap == 50);
  REQUIRE(res.table.rows[2].cls == ReadClass::Anchor);
  const auto after = reassign_optimal(res.table, lib, res.state, p);
  CHECK(after.rows[1].anchor_id == 2);
  CHECK(after.rows[1].shift == -20);
  CHECK(after.rows[1].overlap == 80);
  CHECK(after.rows[1].matches == 80);
  // The old anchor becomes a sub-optimal edge.
  const auto edges = record_suboptimal(res.table, lib, res.state, p, res.edges);
  REQUIRE(edges.member[1].size() == 1);
  CHECK(edges.member[1][0] == Edge{0, 50, Strand::Forward});
}

TEST_CASE("phase 2: ties on length go to the lowest anchor id") {
  std::mt19937_64 rng(15);
  const std::string g = random_dna(rng, 300);
  // Anchors 0 and 2 both overlap member 1 by 60; phase 1 picks neither
  // (member at 55 with anchor 3), phase 2 must pick anchor 0.
  const std::string x = g.substr(100, 100);
  const std::string left = random_dna(rng, 40) + x.substr(0, 60);
  const std::string right = x.substr(40) + random_dna(rng, 40);
  const auto lib = lib_of({left, right, x});
  const auto p = params_for(100);
  const auto res = cluster_library(lib, p);
  REQUIRE(res.table.rows[0].cls == ReadClass::Anchor);
  REQUIRE(res.table.rows[1].cls == ReadClass::Anchor);
  REQUIRE(res.table.rows[2].cls == ReadClass::Member);
  CHECK(res.table.rows[2].anchor_id == 0);
  CHECK(res.table.rows[2].overlap == 60);
  REQUIRE(res.edges.member[2].size() == 1);
  CHECK(res.edges.member[2][0].dst == 1);
}

TEST_CASE("phase 2 on a table without members is the identity") {
  std::mt19937_64 rng(16);
  std::vector<std::string> seqs;
  for (int i = 0; i < 10; ++i) seqs.push_back(random_dna(rng, 60));
  const auto lib = lib_of(seqs);
  const auto p = params_for(60);
  const auto res = cluster_single_end(lib, p);
  CHECK(reassign_optimal(res.table, lib, res.state, p).rows == res.table.rows);
}

TEST_CASE("sub-optimal edges for a three-locus repeat") {
  std::mt19937_64 rng(17);
  const std::string repeat = random_dna(rng, 100);
  std::vector<std::string> seqs;
  for (int i = 0; i < 3; ++i) seqs.push_back(random_dna(rng, 20) + repeat.substr(0, 80));
  seqs.push_back(repeat);
  const auto lib = lib_of(seqs);
  const auto p = params_for(100);
  const auto res = cluster_library(lib, p);
  REQUIRE(res.table.count(ReadClass::Anchor) == 3);
  const Assignment& m = res.table.rows[3];
  REQUIRE(m.cls == ReadClass::Member);

  std::set<std::uint32_t> brute;
  for (std::uint32_t a = 0; a < 3; ++a) {
    if (a == m.anchor_id) continue;
    for (Strand s : {Strand::Forward, Strand::Reverse}) {
      for (int shift = -50; shift <= 50; ++shift) {
        const auto ov = overlap_similarity(lib[a], lib[3], shift, s);
        if (ov->matches >= ceil_threshold(p.beta_prime * ov->length)) brute.insert(a);
      }
    }
  }
  CHECK(brute.size() == 2);
  std::set<std::uint32_t> got;
  for (const Edge& e : res.edges.member[3]) got.insert(e.dst);
  CHECK(got == brute);
  for (const Edge& e : res.edges.member[3]) CHECK(e.shift == 20);
  check_invariants(res, lib, p);
}

TEST_CASE("member edges stop at S_M") {
  std::mt19937_64 rng(18);
  const std::string base = random_dna(rng, 100);
  std::vector<std::string> seqs;
  for (int i = 0; i < 20; ++i) seqs.push_back(testutil::mutate(base, 5 * i + 2));
  seqs.push_back(seqs[0]);
  ClusterParams p = params_for(100);
  p.beta = 1.0;
  const auto lib = lib_of(seqs);
  const auto res = cluster_library(lib, p);
  REQUIRE(res.table.count(ReadClass::Anchor) == 20);
  REQUIRE(res.table.rows[20].anchor_id == 0);
  const auto& edges = res.edges.member[20];
  REQUIRE(edges.size() == 16);
  for (std::uint32_t i = 0; i < 16; ++i) CHECK(edges[i] == Edge{i + 1, 0, Strand::Forward});
  // Anchor edges from phase 1: each anchor links to every other one.
  for (std::uint32_t i = 0; i < 20; ++i) CHECK(res.edges.anchor[i].size() == 19);
}

TEST_CASE("anchor edges stop at S_A") {
  std::mt19937_64 rng(19);
  const std::string base = random_dna(rng, 100);
  std::vector<std::string> seqs;
  for (int i = 0; i < 12; ++i) seqs.push_back(testutil::mutate(base, 7 * i + 3));
  ClusterParams p = params_for(100);
  p.beta = 1.0;
  p.max_anchor_edges = 4;
  const auto res = cluster_library(lib_of(seqs), p);
  for (std::uint32_t i = 0; i < 12; ++i) CHECK(res.edges.anchor[i].size() <= 4);
  CHECK(res.edges.anchor[11].size() == 4);
}

TEST_CASE("compose and invert agree with brute-force placements") {
  std::mt19937_64 rng(20);
  const int len = 60;
  for (int trial = 0; trial < 60; ++trial) {
    const std::string g = random_dna(rng, 200);
    std::string r[3];
    for (auto& s : r) {
      s = g.substr(60 + rng() % 20, len);
      if (rng() % 2) s = reverse_complement(s);
    }
    const auto xy = exact_relation(r[1], r[0], 31);
    const auto yz = exact_relation(r[2], r[1], 31);
    const auto xz = exact_relation(r[2], r[0], 31);
    const auto yx = exact_relation(r[0], r[1], 31);
    REQUIRE((xy && yz && xz && yx));
    const Edge got = compose(xy->first, xy->second, Edge{2, yz->first, yz->second});
    CHECK(got.shift == xz->first);
    CHECK(got.strand == xz->second);
    CHECK(invert(xy->first, xy->second) == *yx);
  }
}

TEST_CASE("pigeonhole: one error in a 31-base overlap is always found") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const int len = 36 + static_cast<int>(rng() % 100);
    const std::string a = random_dna(rng, len);
    ClusterParams p = params_for(len);
    p.list_cap = 1u << 30;
    const int min_l = p.min_overlap(len);
    const int l = min_l + static_cast<int>(rng() % (len - min_l + 1));
    const int shift = len - l;
    std::string b = a.substr(shift) + random_dna(rng, shift);
    if (l >= 40 || rng() % 2) b = testutil::mutate(b, rng() % l);
    const bool before = trial % 3 == 0;  // member placed to the left
    if (before) {
      b = random_dna(rng, shift) + a.substr(0, l);
      b = testutil::mutate(b, shift + rng() % l);
    }
    const auto ov = overlap_similarity(encode(a), encode(b), before ? -shift : shift);
    if (ov.matches < ceil_threshold(p.beta * ov.length)) continue;
    const auto lib = lib_of({a, b});
    ClusterState state(lib, p);
    state.add_anchor(lib[0], p.alpha);
    const auto m = try_assign(lib[1], state.index, state.anchors, p);
    REQUIRE(m.has_value());
    CHECK(m->anchor_id == 0);
  }
}

TEST_CASE("sequential clustering matches the reference enumeration") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const bool reverse_heavy = seed % 2 == 0;
    const auto sim = simulate(seed, 20000, 60 + 20 * (seed % 3), 1200, 0.01 * (seed % 4), false);
    std::vector<std::vector<int>> quals(sim.seqs.size());
    std::mt19937_64 rng(seed);
    ReadLibrary lib(static_cast<int>(sim.seqs[0].size()), false);
    for (std::size_t i = 0; i < sim.seqs.size(); ++i) {
      std::string q(sim.seqs[i].size(), 'I');
      quals[i].assign(q.size(), 40);
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (rng() % 100 == 0) {
          quals[i][j] = 5;
          q[j] = '!' + 5;
        }
      }
      lib.add(sim.seqs[i], q);
    }
    ClusterParams p = params_for(lib.read_length());
    if (reverse_heavy) p.list_cap = 8;
    const auto got = cluster_single_end(lib, p);
    const auto ref = oracle::reference_cluster(
        sim.seqs, quals,
        {p.alpha, p.beta, p.beta_prime, p.k, p.list_cap, p.max_anchor_edges, 10});
    CHECK(got.table.rows == ref.rows);
    CHECK(got.edges.anchor == ref.anchor_edges);
  }
}

TEST_CASE("invariants on simulated libraries") {
  for (bool paired : {false, true}) {
    for (double eps : {0.0, 0.02, 0.05}) {
      const auto sim = simulate(31, 30000, 100, 4000, eps, paired);
      const auto lib = sim.library();
      ClusterParams p = params_for(100);
      p.paired = paired;
      const auto res = cluster_library(lib, p);
      check_invariants(res, lib, p);

      // Phase 2 never shortens an assignment.
      const auto phase1 = paired ? cluster_paired_end(lib, p) : cluster_single_end(lib, p);
      for (std::size_t i = 0; i < lib.size(); ++i) {
        CHECK(res.table.rows[i].cls == phase1.table.rows[i].cls);
        if (res.table.rows[i].cls == ReadClass::Member) {
          CHECK(res.table.rows[i].overlap >= phase1.table.rows[i].overlap);
        }
      }
    }
  }
}

TEST_CASE("sequential mode is deterministic") {
  const auto sim = simulate(41, 20000, 80, 3000, 0.02, true);
  const auto lib = sim.library();
  ClusterParams p = params_for(80);
  p.paired = true;
  const auto a = cluster_library(lib, p);
  const auto b = cluster_library(lib, p);
  CHECK(a.table.rows == b.table.rows);
  CHECK(a.edges.member == b.edges.member);
  CHECK(a.edges.anchor == b.edges.anchor);
}

TEST_CASE("parallel mode satisfies every invariant") {
  for (bool paired : {false, true}) {
    const auto sim = simulate(51, 50000, 100, 12000, 0.02, paired);
    const auto lib = sim.library();
    ClusterParams p = params_for(100);
    p.paired = paired;
    p.threads = 3;
    const auto res = cluster_library(lib, p);
    check_invariants(res, lib, p);
    p.threads = 1;
    const auto seq = cluster_library(lib, p);
    const double diff = std::abs(res.table.cluster_fraction() - seq.table.cluster_fraction());
    CHECK(diff < 0.02);
  }
}

TEST_CASE("parameter validation") {
  ClusterParams p = params_for(100);
  CHECK_NOTHROW(p.validate(100));
  CHECK(ClusterParams::default_alpha(36) == doctest::Approx(31.0 / 36));
  CHECK(ClusterParams::default_alpha(100) == 0.5);
  CHECK(p.phase2_budget(100) == 21);
  p.alpha = 0.3;
  CHECK_THROWS_AS(p.validate(100), Error);
  p = params_for(100);
  p.beta_prime = 0.97;
  CHECK_THROWS_AS(p.validate(100), Error);
  p = params_for(100);
  p.beta = 1.01;
  CHECK_THROWS_AS(p.validate(100), Error);
  p = params_for(100);
  p.k = 17;
  CHECK_THROWS_AS(p.validate(100), Error);
  CHECK_THROWS_AS(params_for(100).validate(30), Error);
}

}  // TEST_SUITE
