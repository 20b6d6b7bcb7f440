#include <iostream>

#include "tool_common.hpp"
#include "treq/cluster.hpp"
#include "treq/simkit.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Accuracy, alternate mapping rate and concordance of SAM output", "treq-eval"};
  app.require_subcommand(1);

  auto* acc = app.add_subcommand("acc", "Fraction of reads mapped within +-L of the truth");
  std::string acc_sam, acc_truth, acc_clusters;
  int acc_len = 100;
  acc->add_option("sam", acc_sam, "SAM to score")->required()->check(CLI::ExistingFile);
  acc->add_option("truth", acc_truth, "Truth TSV")->required()->check(CLI::ExistingFile);
  acc->add_option("-L,--read-len", acc_len, "Read length")->check(CLI::PositiveNumber);
  acc->add_option("--clusters", acc_clusters, "Cluster prefix; bad reads are left out");

  auto* alt = app.add_subcommand("alt", "Alternate mapping rate between two SAM files (percent)");
  std::string alt_a, alt_b;
  int alt_mapq = 0, alt_len = 100;
  alt->add_option("a", alt_a, "First SAM")->required()->check(CLI::ExistingFile);
  alt->add_option("b", alt_b, "Second SAM")->required()->check(CLI::ExistingFile);
  alt->add_option("--mapq", alt_mapq, "Records below this MAPQ count as unmapped")
      ->check(CLI::NonNegativeNumber);
  alt->add_option("-L,--read-len", alt_len, "Read length")->check(CLI::PositiveNumber);

  auto* conc = app.add_subcommand("conc", "Proportion of concordant pairs");
  std::string conc_sam;
  double mean = 0, sd = 0;
  conc->add_option("sam", conc_sam, "Paired SAM")->required()->check(CLI::ExistingFile);
  conc->add_option("--insert-mean", mean, "Insert mean")->required()->check(CLI::PositiveNumber);
  conc->add_option("--insert-sd", sd, "Insert standard deviation")->required()->check(CLI::PositiveNumber);

  return treq::tools::run(app, argc, argv, [&] {
    if (acc->parsed()) {
      auto truth_in = treq::tools::open_in(acc_truth);
      const auto truth = treq::read_truth(truth_in);
      auto sam_in = treq::tools::open_in(acc_sam);
      const auto calls = treq::load_calls(sam_in, truth.size());
      std::vector<bool> include;
      if (!acc_clusters.empty()) {
        auto table_in = treq::tools::open_in(treq::tools::clusters_path(acc_clusters));
        const auto table = treq::read_cluster_table(table_in);
        if (table.rows.size() != truth.size()) throw treq::Error("cluster table and truth differ in size");
        for (const auto& a : table.rows) include.push_back(a.cls != treq::ReadClass::Bad);
      }
      const double v = treq::accuracy(calls, truth, acc_len, include.empty() ? nullptr : &include);
      std::cout << "accuracy\t" << treq::format_real(v) << '\n';
    } else if (alt->parsed()) {
      auto in_a = treq::tools::open_in(alt_a);
      auto in_b = treq::tools::open_in(alt_b);
      const auto a = treq::load_calls(in_a, 0);
      const auto b = treq::load_calls(in_b, 0);
      const double v = treq::alternate_mapping_rate(a, b, alt_mapq, alt_len);
      std::cout << "alternate_mapping_rate\t" << treq::format_real(v) << '\n';
    } else {
      auto in = treq::tools::open_in(conc_sam);
      const auto calls = treq::load_calls(in, 0);
      const double v = treq::concordance(calls, treq::InsertModel{mean, sd});
      std::cout << "concordance\t" << treq::format_real(v) << '\n';
    }
    return 0;
  });
}
