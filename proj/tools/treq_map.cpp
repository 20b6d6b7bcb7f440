#include <iostream>

#include "tool_common.hpp"
#include "treq/mapper.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct alignments of all reads from mapped anchors", "treq-map"};
  std::string genome_path, cluster_prefix, anchor_sam, out_sam;
  std::vector<std::string> fastq;
  int threads = 1;
  std::optional<double> insert_mean, insert_sd;
  bool phred64 = false;
  app.add_option("-t,--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--insert-mean", insert_mean, "Insert mean (skips estimation)")
      ->check(CLI::PositiveNumber);
  app.add_option("--insert-sd", insert_sd, "Insert standard deviation")->check(CLI::PositiveNumber);
  app.add_flag("--phred64", phred64, "Qualities are Phred+64");
  app.add_option("genome", genome_path, "Reference FASTA")->required()->check(CLI::ExistingFile);
  app.add_option("cluster_prefix", cluster_prefix, "Prefix given to treq-cluster")->required();
  app.add_option("anchor_sam", anchor_sam, "SAM of the anchor reads")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("out_sam", out_sam, "Output SAM")->required();
  app.add_option("reads", fastq, "The FASTQ file(s) that were clustered")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);

  return treq::tools::run(app, argc, argv, [&] {
    if (insert_mean.has_value() != insert_sd.has_value()) {
      throw treq::tools::UsageError("--insert-mean and --insert-sd go together");
    }
    auto table_in = treq::tools::open_in(treq::tools::clusters_path(cluster_prefix));
    auto edges_in = treq::tools::open_in(treq::tools::edges_path(cluster_prefix));
    const treq::ClusterTable table = treq::read_cluster_table(table_in);
    const treq::SubOptimalEdges edges = treq::read_edges(edges_in, table.rows.size());
    const treq::Genome genome = treq::load_fasta(genome_path);

    treq::ReadOptions opts;
    opts.phred_offset = phred64 ? 64 : 33;
    opts.quality_threshold = 0;
    const treq::ReadLibrary lib = treq::load_library(fastq, opts);

    auto sam_in = treq::tools::open_in(anchor_sam);
    treq::AnchorSet anchors = treq::parse_anchor_sam(sam_in, table);
    treq::resolve_references(anchors, genome);

    treq::MapOptions options;
    options.threads = threads;
    if (insert_mean) options.insert = treq::InsertModel{*insert_mean, *insert_sd};
    options.command_line = treq::tools::command_line(argc, argv);
    auto out = treq::tools::open_out(out_sam);
    const treq::MapStats stats = treq::map_clusters(genome, table, edges, lib, anchors, out, options);
    out.flush();
    if (!out) throw treq::Error("failed writing " + out_sam);

    std::cout << "reads\t" << stats.reads << "\nanchors\t" << stats.anchors << "\nmembers_mapped\t"
              << stats.members_mapped << "\nmembers_unmapped\t" << stats.members_unmapped
              << "\nbad\t" << stats.bad << "\nsmith_waterman\t" << stats.smith_waterman
              << "\nrescued\t" << stats.rescued << '\n';
    if (stats.insert) {
      std::cout << "insert_mean\t" << treq::format_real(stats.insert->mean) << "\ninsert_sd\t"
                << treq::format_real(stats.insert->sd) << '\n';
    }
    return 0;
  });
}
