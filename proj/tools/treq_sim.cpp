#include <iostream>

#include "tool_common.hpp"
#include "treq/genome.hpp"
#include "treq/simkit.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulate an i.i.d. genome and reads with known origin", "treq-sim"};
  treq::SimParams p;
  std::string out_prefix;
  app.add_option("--seed", p.seed, "RNG seed");
  app.add_option("-G,--genome-len", p.genome_len, "Genome length")->check(CLI::PositiveNumber);
  app.add_option("-L,--read-len", p.read_len, "Read length")->check(CLI::Range(31, 65535));
  app.add_option("-c,--coverage", p.coverage, "Coverage (ignored when -N is given)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("-N,--reads", p.n_reads, "Number of reads")->check(CLI::NonNegativeNumber);
  app.add_option("-e,--epsilon", p.epsilon, "Per-base substitution rate")->check(CLI::Range(0.0, 0.999));
  app.add_flag("--paired", p.paired, "Simulate pairs (mate 2 from the opposite strand)");
  app.add_option("--insert-mean", p.insert_mean, "Mean insert")->check(CLI::PositiveNumber);
  app.add_option("--insert-sd", p.insert_sd, "Insert standard deviation")->check(CLI::NonNegativeNumber);
  app.add_option("-o,--out", out_prefix, "Output prefix: .fa, .fq (or _1.fq/_2.fq), .truth.tsv");

  auto* oracle = app.add_subcommand("oracle", "Anchor SAM that places each anchor at its true origin");
  std::string genome_path, cluster_prefix, truth_path, sam_path;
  std::vector<std::string> fastq;
  oracle->add_option("genome", genome_path, "Simulated genome FASTA")->required()->check(CLI::ExistingFile);
  oracle->add_option("cluster_prefix", cluster_prefix, "Prefix given to treq-cluster")->required();
  oracle->add_option("truth", truth_path, "Truth TSV")->required()->check(CLI::ExistingFile);
  oracle->add_option("out_sam", sam_path, "Output SAM")->required();
  oracle->add_option("reads", fastq, "The clustered FASTQ file(s)")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);
  app.require_subcommand(0, 1);

  return treq::tools::run(app, argc, argv, [&] {
    if (oracle->parsed()) {
      auto table_in = treq::tools::open_in(treq::tools::clusters_path(cluster_prefix));
      const treq::ClusterTable table = treq::read_cluster_table(table_in);
      auto truth_in = treq::tools::open_in(truth_path);
      const auto truth = treq::read_truth(truth_in);
      treq::ReadOptions opts;
      opts.quality_threshold = 0;
      const treq::ReadLibrary lib = treq::load_library(fastq, opts);
      const treq::Genome genome = treq::load_fasta(genome_path);
      auto out = treq::tools::open_out(sam_path);
      treq::oracle_place_anchors(out, table, truth, lib, genome.total_length());
      out.flush();
      if (!out) throw treq::Error("failed writing " + sam_path);
      std::cout << "anchors\t" << table.count(treq::ReadClass::Anchor) << '\n';
      return 0;
    }
    if (out_prefix.empty()) throw treq::tools::UsageError("--out is required");
    try {
      p.validate();
    } catch (const treq::Error& e) {
      throw treq::tools::UsageError(e.what());
    }
    const std::string genome = treq::generate_genome(p);
    const treq::SimulatedReads reads = treq::sample_reads(genome, p);

    treq::Genome g;
    g.add(treq::kSimRefName, genome);
    auto fa = treq::tools::open_out(out_prefix + ".fa");
    treq::write_fasta(fa, g);
    if (p.paired) {
      auto r1 = treq::tools::open_out(out_prefix + "_1.fq");
      auto r2 = treq::tools::open_out(out_prefix + "_2.fq");
      treq::write_fastq(r1, reads, 1);
      treq::write_fastq(r2, reads, 2);
      if (!r1 || !r2) throw treq::Error("failed writing FASTQ");
    } else {
      auto fq = treq::tools::open_out(out_prefix + ".fq");
      treq::write_fastq(fq, reads);
      if (!fq) throw treq::Error("failed writing FASTQ");
    }
    auto truth = treq::tools::open_out(out_prefix + ".truth.tsv");
    treq::write_truth(truth, reads.truth);
    if (!fa || !truth) throw treq::Error("failed writing simulation output");
    std::cout << "reads\t" << reads.seqs.size() << '\n';
    return 0;
  });
}
