#include <iostream>
#include <optional>

#include "tool_common.hpp"
#include "treq/predictor.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Forecast the number of clusters for an i.i.d. genome", "treq-predict"};
  treq::PredictorInputs in;
  std::optional<double> alpha;
  std::int64_t every = 1;
  app.add_option("-N", in.n_reads, "Number of reads")->required()->check(CLI::PositiveNumber);
  app.add_option("-L", in.read_len, "Read length")->required()->check(CLI::PositiveNumber);
  app.add_option("-G", in.genome_len, "Genome length")->required()->check(CLI::PositiveNumber);
  app.add_option("-a,--alpha", alpha, "Minimum overlap fraction (default max(0.5, 31/L))")
      ->check(CLI::Range(0.5, 1.0));
  app.add_option("-b,--beta", in.beta, "Minimum similarity")->check(CLI::Range(0.0, 1.0));
  app.add_option("-e,--epsilon", in.epsilon, "Per-base substitution rate")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--every", every, "Print every n-th step (the last step is always printed)")
      ->check(CLI::PositiveNumber);

  return treq::tools::run(app, argc, argv, [&] {
    in.alpha = alpha ? *alpha : std::max(0.5, 31.0 / in.read_len);
    try {
      in.validate();
    } catch (const treq::Error& e) {
      throw treq::tools::UsageError(e.what());
    }
    const treq::ClusterForecast f = treq::expected_clusters(in);
    if (in.allowed_mismatches() == 0) {
      std::cerr << "treq-predict: warning: beta admits no mismatch at l' = "
                << in.expected_overlap() << "; every erroneous read founds a cluster\n";
    }
    std::cout << "i\tT_i\tP_i*\n";
    const auto n = static_cast<std::size_t>(in.n_reads);
    for (std::size_t i = 1; i <= n; ++i) {
      if (i % every != 0 && i != n) continue;
      std::cout << i << '\t' << treq::format_real(f.t[i]) << '\t' << treq::format_real(f.p[i]) << '\n';
    }
    std::cout << "tau=" << treq::format_real(f.tau()) << '\n';
    return 0;
  });
}
