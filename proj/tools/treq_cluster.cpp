#include <iostream>
#include <optional>

#include "tool_common.hpp"
#include "treq/cluster.hpp"
#include "treq/readio.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cluster reads by k-mer anchored prefix-suffix overlap", "treq-cluster"};
  std::string prefix;
  std::vector<std::string> fastq;
  int quality = 10, threads = 1, k = treq::kDefaultK;
  double beta = 0.95, beta_prime = 0.8;
  std::optional<double> alpha;
  bool phred64 = false;
  app.add_option("-q,--quality", quality, "Bases below this Phred score are bad (0 disables)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("-t,--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("-s,--similarity", beta, "Minimum similarity beta")->check(CLI::Range(0.0, 1.0));
  app.add_option("-a,--alpha", alpha, "Minimum overlap fraction (default max(0.5, 31/L))")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--beta-prime", beta_prime, "Similarity floor for sub-optimal edges")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("-k", k, "k-mer size")->check(CLI::Range(8, 16));
  app.add_flag("--phred64", phred64, "Qualities are Phred+64");
  app.add_option("cluster_prefix", prefix, "Output prefix")->required();
  app.add_option("reads", fastq, "One FASTQ (single-end) or two (paired-end)")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);

  return treq::tools::run(app, argc, argv, [&] {
    treq::ReadOptions opts;
    opts.quality_threshold = quality;
    opts.phred_offset = phred64 ? 64 : 33;
    const treq::ReadLibrary lib = treq::load_library(fastq, opts);
    auto params = treq::ClusterParams::for_read_length(lib.read_length());
    if (alpha) params.alpha = *alpha;
    params.beta = beta;
    params.beta_prime = beta_prime;
    params.k = k;
    params.threads = threads;
    params.paired = lib.paired();
    const treq::ClusterResult res = treq::cluster_library(lib, params);

    auto table_out = treq::tools::open_out(treq::tools::clusters_path(prefix));
    treq::write_cluster_table(table_out, res.table);
    auto edges_out = treq::tools::open_out(treq::tools::edges_path(prefix));
    treq::write_edges(edges_out, res.edges);
    if (!table_out || !edges_out) throw treq::Error("failed writing cluster files");

    std::cout << "n_reads\t" << lib.size() << "\nn_anchors\t"
              << res.table.count(treq::ReadClass::Anchor) << "\nn_members\t"
              << res.table.count(treq::ReadClass::Member) << "\nn_bad\t"
              << res.table.count(treq::ReadClass::Bad) << "\ntau\t"
              << treq::format_real(res.table.cluster_fraction()) << '\n';
    return 0;
  });
}
