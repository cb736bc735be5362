#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "corrtree/bootstrap.hpp"
#include "corrtree/clustering.hpp"
#include "corrtree/correlation.hpp"
#include "corrtree/error.hpp"
#include "corrtree/graph.hpp"
#include "corrtree/panel.hpp"
#include "corrtree/report.hpp"
#include "corrtree/version.hpp"

namespace corrtree {

struct RunConfig {
  std::filesystem::path input;
  int tau = 1;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  MissingDataPolicy policy = MissingDataPolicy::drop_entity;
  std::vector<std::size_t> clusters{3};
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;  // affects speed only
  bool dump_matrices = false;
};

struct AnalysisMatrices {
  CorrelationMatrix correlation;
  DistanceMatrix distance;
};

/// Panel -> returns -> correlations -> distances -> MST with bootstrap
/// values, single- and average-linkage trees, and the requested cuts.
/// Warnings go to `diag`.
inline AnalysisReport analyze(std::istream& source, const RunConfig& config, std::ostream& diag,
                              AnalysisMatrices* matrices = nullptr) {
  if (config.replicates < 1) throw Error(ErrorCode::range_error, "replicates must be at least 1");
  if (config.tau < 1) throw Error(ErrorCode::range_error, "tau must be at least 1");

  LoadedPanel loaded = load_panel(source, config.policy);
  for (const auto& ex : loaded.excluded) {
    diag << "warning: excluded entity '" << ex.entity << "': " << ex.reason << '\n';
  }
  const TimeSeriesPanel& panel = loaded.panel;
  const std::size_t n = panel.n_entities();
  for (std::size_t k : config.clusters) {
    if (k < 1 || k > n) {
      throw Error(ErrorCode::range_error, "cluster count " + std::to_string(k) + " outside [1, " +
                                              std::to_string(n) + "]");
    }
  }

  const ReturnMatrix returns = log_returns(panel, config.tau);
  const CorrelationMatrix corr = pearson(returns);
  const DistanceMatrix dist = to_distance(corr);
  if (matrices) *matrices = {corr, dist};
  const SpanningTree mst = kruskal_mst(dist);
  const BootstrapReport boot =
      bootstrap_links(returns, mst, config.replicates, config.seed, config.workers);
  if (boot.excluded_replicates > 0) {
    diag << "warning: " << boot.excluded_replicates << " of " << boot.replicates
         << " bootstrap replicates skipped (zero-variance resample)\n";
  }
  diag << "bootstrap: " << boot.valid_replicates() << " valid replicates\n";

  AnalysisReport report;
  auto& md = report.metadata;
  md.input_file = config.input.string();
  md.period_start = panel.periods.front();
  md.period_end = panel.periods.back();
  md.tau = config.tau;
  md.n_entities = n;
  md.n_periods = panel.n_periods();
  md.missing_data_policy = std::string(to_string(config.policy));
  md.excluded_entities = loaded.excluded;
  md.seed = boot.seed;
  md.replicates = boot.replicates;
  md.excluded_replicates = boot.excluded_replicates;
  md.rng = boot.rng;
  md.tool_version = kVersion;

  report.mst = annotate(mst, boot);
  report.bootstrap = boot.per_edge;
  report.single_linkage = single_linkage(dist);
  report.average_linkage = average_linkage(dist);
  for (std::size_t k : config.clusters) {
    report.cuts.push_back(cut(report.single_linkage, ClusterCount{k}));
    report.cuts.push_back(cut(report.average_linkage, ClusterCount{k}));
  }
  return report;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

}  // namespace detail

/// Writes mst.dot, single_linkage.nwk, average_linkage.nwk and report.json.
inline void write_artifacts(const AnalysisReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
  detail::write_file(dir / "mst.dot", to_dot(report.mst));
  detail::write_file(dir / "single_linkage.nwk", to_newick(report.single_linkage) + "\n");
  detail::write_file(dir / "average_linkage.nwk", to_newick(report.average_linkage) + "\n");
  detail::write_file(dir / "report.json", to_json(report));
}

inline AnalysisReport run(const RunConfig& config, std::ostream& diag) {
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + config.input.string());
  AnalysisMatrices matrices;
  AnalysisReport report = analyze(in, config, diag, &matrices);
  write_artifacts(report, config.out_dir);
  if (config.dump_matrices) {
    std::ostringstream c, d;
    write_matrix_csv(c, matrices.correlation.entities, matrices.correlation.values);
    write_matrix_csv(d, matrices.distance.entities, matrices.distance.values);
    detail::write_file(config.out_dir / "correlation.csv", c.str());
    detail::write_file(config.out_dir / "distance.csv", d.str());
  }
  return report;
}

}  // namespace corrtree
