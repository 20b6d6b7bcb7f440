#include <iostream>

#include "tool_common.hpp"
#include "treq/cluster.hpp"
#include "treq/readio.hpp"
#include "treq/sam.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the anchor reads of a clustering as FASTQ", "treq-split"};
  std::string cluster_prefix, anchor_prefix;
  std::vector<std::string> fastq;
  app.add_option("cluster_prefix", cluster_prefix, "Prefix given to treq-cluster")->required();
  app.add_option("anchor_prefix", anchor_prefix, "Output prefix")->required();
  app.add_option("reads", fastq, "The FASTQ file(s) that were clustered")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);

  return treq::tools::run(app, argc, argv, [&] {
    auto table_in = treq::tools::open_in(treq::tools::clusters_path(cluster_prefix));
    const treq::ClusterTable table = treq::read_cluster_table(table_in);
    const bool paired = fastq.size() == 2;
    if (paired != table.paired) {
      throw treq::tools::UsageError("cluster table mode does not match the number of FASTQ files");
    }

    std::vector<std::unique_ptr<treq::FastqReader>> in;
    std::vector<std::ofstream> out;
    for (std::size_t m = 0; m < fastq.size(); ++m) {
      in.push_back(std::make_unique<treq::FastqReader>(fastq[m]));
      const std::string suffix = paired ? "_" + std::to_string(m + 1) + ".fq" : ".fq";
      out.push_back(treq::tools::open_out(anchor_prefix + suffix));
    }

    std::size_t written = 0, seen = 0;
    const std::size_t stride = fastq.size();
    std::vector<treq::FastqRecord> rec(stride);
    while (true) {
      std::size_t got = 0;
      for (std::size_t m = 0; m < stride; ++m) got += in[m]->next(rec[m]);
      if (got == 0) break;
      if (got != stride) throw treq::Error("mate files have different record counts");
      for (std::size_t m = 0; m < stride; ++m, ++seen) {
        if (seen >= table.rows.size()) {
          throw treq::Error("FASTQ input holds more reads than the cluster table (" +
                            std::to_string(table.rows.size()) + ")");
        }
        if (table.rows[seen].cls != treq::ReadClass::Anchor) continue;
        out[m] << '@' << treq::treq_qname(seen, paired) << '\n'
               << rec[m].seq << "\n+\n" << rec[m].qual << '\n';
        ++written;
      }
    }
    if (seen != table.rows.size()) {
      throw treq::Error("cluster table has " + std::to_string(table.rows.size()) +
                        " reads, FASTQ input has " + std::to_string(seen));
    }
    for (auto& o : out) {
      o.flush();
      if (!o) throw treq::Error("failed writing anchor FASTQ");
    }
    std::cout << "anchors\t" << written << '\n';
    return 0;
  });
}
