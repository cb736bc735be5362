// corrtree: correlation taxonomy of a time-series panel.
//
//   corrtree --input panel.csv --out results/ [--tau 1] [--replicates 1000]
//            [--seed 0] [--policy drop-entity|error] [--clusters 3[,K...]]
//
// CORRTREE_WORKERS sets the bootstrap thread count; results do not depend on it.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "corrtree/corrtree.hpp"

namespace {

unsigned worker_count() {
  const char* env = std::getenv("CORRTREE_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  auto parsed = corrtree::parse_integer(env);
  if (!parsed || *parsed < 1) {
    std::cerr << "warning: ignoring invalid CORRTREE_WORKERS='" << env << "'\n";
    return 1;
  }
  return static_cast<unsigned>(*parsed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-based taxonomy: MST with bootstrap link reliability, "
               "single- and average-linkage hierarchical trees"};
  app.set_version_flag("--version", std::string("corrtree ") + corrtree::kVersion);

  corrtree::RunConfig config;
  std::string input;
  std::string out_dir = ".";
  app.add_option("--input", input, "Panel CSV (header: period,<entity>...)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--tau", config.tau, "Return lag in periods")
      ->capture_default_str()
      ->check(CLI::Range(1, 1 << 30));
  app.add_option("--replicates", config.replicates, "Bootstrap replicates")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  app.add_option("--seed", config.seed, "Bootstrap seed")->capture_default_str();
  std::string policy = "drop-entity";
  app.add_option("--policy", policy, "Missing-data policy")
      ->capture_default_str()
      ->check(CLI::IsMember({"drop-entity", "error"}));
  app.add_option("--clusters", config.clusters, "Cluster counts to cut, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--dump-matrices", config.dump_matrices,
               "Also write correlation.csv and distance.csv");

  CLI11_PARSE(app, argc, argv);

  config.policy = policy == "error" ? corrtree::MissingDataPolicy::error
                                    : corrtree::MissingDataPolicy::drop_entity;
  config.input = input;
  config.out_dir = out_dir;
  config.workers = worker_count();

  try {
    auto report = corrtree::run(config, std::cerr);
    std::cerr << "wrote " << (config.out_dir / "report.json").string() << " ("
              << report.metadata.n_entities << " entities, " << report.mst.edges.size()
              << " tree edges)\n";
  } catch (const corrtree::Error& e) {
    std::cerr << "corrtree: error[" << corrtree::to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "corrtree: error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
