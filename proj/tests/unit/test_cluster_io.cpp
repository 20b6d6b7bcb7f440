#include <doctest.h>

#include <sstream>

#include "treq/cluster.hpp"
#include "treq/simkit.hpp"

using namespace treq;

TEST_SUITE("cluster_io") {

TEST_CASE("cluster table text is exact") {
  ClusterTable t;
  t.k = 15;
  t.alpha = 0.5;
  t.beta = 0.95;
  t.read_len = 100;
  t.rows.push_back(Assignment::anchor(0, 100));
  Assignment m;
  m.read_id = 1;
  m.cls = ReadClass::Member;
  m.anchor_id = 0;
  m.shift = -12;
  m.strand = Strand::Reverse;
  m.overlap = 88;
  m.matches = 87;
  t.rows.push_back(m);
  t.rows.push_back(Assignment::bad(2));
  std::ostringstream out;
  write_cluster_table(out, t);
  CHECK(out.str() ==
        "#treq-cg v1 k=15 alpha=0.5 beta=0.95 mode=SE n_reads=3 read_len=100\n"
        "0\tA\t0\t0\t+\t100\t100\n"
        "1\tM\t0\t-12\t-\t88\t87\n"
        "2\tB\t-1\t-1\t+\t-1\t-1\n");
}

TEST_CASE("edges text is exact") {
  SubOptimalEdges e(3);
  e.member[1].push_back(Edge{2, 5, Strand::Forward});
  e.anchor[0].push_back(Edge{2, -7, Strand::Reverse});
  std::ostringstream out;
  write_edges(out, e);
  CHECK(out.str() == "M\t1\t2\t5\t+\nA\t0\t2\t-7\t-\n");
}

TEST_CASE("round trip of a clustered library") {
  SimParams sp;
  sp.genome_len = 20000;
  sp.read_len = 80;
  sp.n_reads = 2000;
  sp.epsilon = 0.02;
  sp.paired = true;
  sp.insert_mean = 240;
  sp.insert_sd = 20;
  const auto sim = sample_reads(generate_genome(sp), sp);
  const auto lib = sim.library();
  ClusterParams p = ClusterParams::for_read_length(80);
  p.paired = true;
  const auto res = cluster_library(lib, p);

  std::stringstream table_io, edge_io;
  write_cluster_table(table_io, res.table);
  write_edges(edge_io, res.edges);
  const ClusterTable t = read_cluster_table(table_io);
  CHECK(t.paired);
  CHECK(t.read_len == 80);
  CHECK(t.alpha == res.table.alpha);
  REQUIRE(t.rows.size() == res.table.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    Assignment expect = res.table.rows[i];
    expect.forced = false;  // not persisted
    CHECK(t.rows[i] == expect);
  }
  const SubOptimalEdges e = read_edges(edge_io, lib.size());
  CHECK(e.member == res.edges.member);
  CHECK(e.anchor == res.edges.anchor);
}

TEST_CASE("malformed tables are rejected") {
  const std::string header = "#treq-cg v1 k=15 alpha=0.5 beta=0.95 mode=SE n_reads=2 read_len=100\n";
  std::istringstream no_header("0\tA\t0\t0\t+\t100\t100\n");
  CHECK_THROWS_AS(read_cluster_table(no_header), Error);
  std::istringstream short_table(header + "0\tA\t0\t0\t+\t100\t100\n");
  CHECK_THROWS_AS(read_cluster_table(short_table), Error);
  std::istringstream order(header + "1\tA\t1\t0\t+\t100\t100\n0\tA\t0\t0\t+\t100\t100\n");
  CHECK_THROWS_AS(read_cluster_table(order), Error);
  std::istringstream cls(header + "0\tQ\t0\t0\t+\t100\t100\n1\tA\t1\t0\t+\t100\t100\n");
  CHECK_THROWS_AS(read_cluster_table(cls), Error);
  std::istringstream edges("X\t0\t1\t0\t+\n");
  CHECK_THROWS_AS(read_edges(edges, 2), Error);
  std::istringstream range("M\t0\t5\t0\t+\n");
  CHECK_THROWS_AS(read_edges(range, 2), Error);
}

}  // TEST_SUITE
