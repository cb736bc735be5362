#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "corrtree/bootstrap.hpp"
#include "corrtree/dendrogram.hpp"
#include "corrtree/error.hpp"
#include "corrtree/format.hpp"
#include "corrtree/graph.hpp"
#include "corrtree/panel.hpp"
#include "json.hpp"

namespace corrtree {

inline constexpr int kReportSchemaVersion = 1;

struct ReportMetadata {
  std::string input_file;
  long long period_start = 0;
  long long period_end = 0;
  int tau = 1;
  std::size_t n_entities = 0;
  std::size_t n_periods = 0;
  std::string missing_data_policy;
  std::vector<Exclusion> excluded_entities;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::size_t excluded_replicates = 0;
  std::string rng;
  std::string average_linkage_convention = "UPGMA";
  std::string tool_version;

  bool operator==(const ReportMetadata&) const = default;
};

struct AnalysisReport {
  ReportMetadata metadata;
  SpanningTree mst;  // bootstrap values populated
  std::vector<EdgeReliability> bootstrap;
  Dendrogram single_linkage;
  Dendrogram average_linkage;
  std::vector<ClusterCut> cuts;

  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

inline std::string dot_id(std::string_view label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline std::string newick_label(std::string_view label) {
  if (!label.empty() && label.find_first_of(" \t\r\n()[]':;,_") == std::string_view::npos) {
    return std::string(label);
  }
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + '\'';
}

}  // namespace detail

/// Undirected Graphviz graph of the tree. Bootstrap values, when present,
/// become two-decimal edge labels; distances go in `weight` with 6 decimals.
inline std::string to_dot(const SpanningTree& tree) {
  std::ostringstream out;
  out << "graph mst {\n";
  for (const auto& label : tree.entities) out << "  " << detail::dot_id(label) << ";\n";
  for (const Edge& e : tree.edges) {
    out << "  " << detail::dot_id(tree.entities[e.a]) << " -- " << detail::dot_id(tree.entities[e.b])
        << " [";
    if (e.bootstrap) out << "label=\"" << format_fixed(*e.bootstrap, 2) << "\", ";
    out << "weight=" << format_fixed(e.weight, 6) << "];\n";
  }
  out << "}\n";
  return out.str();
}

/// Rooted Newick with branch length = parent height - child height.
/// Children are written in order of their smallest entity index.
inline std::string to_newick(const Dendrogram& tree) {
  const std::size_t n = tree.n_leaves();
  if (n == 1) return detail::newick_label(tree.entities[0]) + ";";
  auto members = node_members(tree);
  auto height = [&](std::size_t id) { return id < n ? 0.0 : tree.merges[id - n].height; };

  std::string out;
  struct Frame {
    std::size_t id;
    double parent_height;
    int stage;
  };
  std::vector<Frame> stack{{n + tree.merges.size() - 1, 0.0, 0}};
  auto emit_length = [&](std::size_t id, double parent_height) {
    out += ':';
    out += format_roundtrip(parent_height - height(id));
  };
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.id < n) {
      out += detail::newick_label(tree.entities[f.id]);
      emit_length(f.id, f.parent_height);
      stack.pop_back();
      continue;
    }
    const Merge& m = tree.merges[f.id - n];
    std::size_t first = m.left, second = m.right;
    if (members[second].front() < members[first].front()) std::swap(first, second);
    const double h = m.height;
    if (f.stage == 0) {
      out += '(';
      f.stage = 1;
      stack.push_back({first, h, 0});
    } else if (f.stage == 1) {
      out += ',';
      f.stage = 2;
      stack.push_back({second, h, 0});
    } else {
      out += ')';
      const std::size_t id = f.id;
      const double ph = f.parent_height;
      stack.pop_back();
      if (!stack.empty()) emit_length(id, ph);
    }
  }
  return out + ";";
}

namespace detail {

using nlohmann::json;

inline json edges_json(const SpanningTree& tree) {
  json edges = json::array();
  for (const Edge& e : tree.edges) {
    edges.push_back({{"a", tree.entities[e.a]},
                     {"b", tree.entities[e.b]},
                     {"weight", e.weight},
                     {"bootstrap", e.bootstrap ? json(*e.bootstrap) : json(nullptr)}});
  }
  return edges;
}

inline json dendrogram_json(const Dendrogram& tree) {
  json merges = json::array();
  for (const Merge& m : tree.merges) {
    merges.push_back(
        {{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  return {{"linkage", to_string(tree.linkage)}, {"merges", merges}};
}

inline Linkage linkage_from(const std::string& s) {
  if (s == "single") return Linkage::single;
  if (s == "average") return Linkage::average;
  throw Error(ErrorCode::parse_error, "unknown linkage '" + s + "'");
}

inline Dendrogram dendrogram_from(const json& j, const std::vector<std::string>& entities) {
  Dendrogram d{entities, {}, linkage_from(j.at("linkage").get<std::string>())};
  for (const auto& m : j.at("merges")) {
    d.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                        m.at("height").get<double>(), m.at("size").get<std::size_t>()});
  }
  return d;
}

}  // namespace detail

/// One JSON document with sorted keys and round-trip number precision.
inline std::string to_json(const AnalysisReport& report) {
  using nlohmann::json;
  const auto& md = report.metadata;
  json excluded = json::array();
  for (const auto& e : md.excluded_entities) {
    excluded.push_back({{"entity", e.entity}, {"reason", e.reason}});
  }
  json reliability = json::array();
  for (const auto& r : report.bootstrap) {
    reliability.push_back({{"a", r.a}, {"b", r.b}, {"hits", r.hits}, {"fraction", r.fraction}});
  }
  json cuts = json::array();
  for (const auto& c : report.cuts) {
    cuts.push_back({{"linkage", to_string(c.linkage)},
                    {"k", c.k ? json(*c.k) : json(nullptr)},
                    {"threshold", c.threshold ? json(*c.threshold) : json(nullptr)},
                    {"clusters", c.clusters}});
  }
  json doc = {
      {"schema_version", kReportSchemaVersion},
      {"metadata",
       {{"input_file", md.input_file},
        {"period_start", md.period_start},
        {"period_end", md.period_end},
        {"tau", md.tau},
        {"n_entities", md.n_entities},
        {"n_periods", md.n_periods},
        {"missing_data_policy", md.missing_data_policy},
        {"excluded_entities", excluded},
        {"seed", md.seed},
        {"replicates", md.replicates},
        {"excluded_replicates", md.excluded_replicates},
        {"rng", md.rng},
        {"average_linkage_convention", md.average_linkage_convention},
        {"tool_version", md.tool_version}}},
      {"entities", report.mst.entities},
      {"mst", {{"edges", detail::edges_json(report.mst)}}},
      {"bootstrap", {{"edges", reliability}}},
      {"single_linkage", detail::dendrogram_json(report.single_linkage)},
      {"average_linkage", detail::dendrogram_json(report.average_linkage)},
      {"cuts", cuts},
  };
  return doc.dump(2) + "\n";
}

/// Inverse of to_json.
inline AnalysisReport report_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("invalid report JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorCode::parse_error, "unsupported report schema version");
    }
    AnalysisReport r;
    const auto& md = doc.at("metadata");
    r.metadata.input_file = md.at("input_file").get<std::string>();
    r.metadata.period_start = md.at("period_start").get<long long>();
    r.metadata.period_end = md.at("period_end").get<long long>();
    r.metadata.tau = md.at("tau").get<int>();
    r.metadata.n_entities = md.at("n_entities").get<std::size_t>();
    r.metadata.n_periods = md.at("n_periods").get<std::size_t>();
    r.metadata.missing_data_policy = md.at("missing_data_policy").get<std::string>();
    for (const auto& e : md.at("excluded_entities")) {
      r.metadata.excluded_entities.push_back(
          {e.at("entity").get<std::string>(), e.at("reason").get<std::string>()});
    }
    r.metadata.seed = md.at("seed").get<std::uint64_t>();
    r.metadata.replicates = md.at("replicates").get<std::size_t>();
    r.metadata.excluded_replicates = md.at("excluded_replicates").get<std::size_t>();
    r.metadata.rng = md.at("rng").get<std::string>();
    r.metadata.average_linkage_convention = md.at("average_linkage_convention").get<std::string>();
    r.metadata.tool_version = md.at("tool_version").get<std::string>();

    const auto entities = doc.at("entities").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < entities.size(); ++i) index[entities[i]] = i;
    r.mst.entities = entities;
    for (const auto& e : doc.at("mst").at("edges")) {
      Edge edge{index.at(e.at("a").get<std::string>()), index.at(e.at("b").get<std::string>()),
                e.at("weight").get<double>(), std::nullopt};
      if (!e.at("bootstrap").is_null()) edge.bootstrap = e.at("bootstrap").get<double>();
      r.mst.edges.push_back(edge);
    }
    for (const auto& e : doc.at("bootstrap").at("edges")) {
      r.bootstrap.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                             e.at("hits").get<std::size_t>(), e.at("fraction").get<double>()});
    }
    r.single_linkage = detail::dendrogram_from(doc.at("single_linkage"), entities);
    r.average_linkage = detail::dendrogram_from(doc.at("average_linkage"), entities);
    for (const auto& c : doc.at("cuts")) {
      ClusterCut cut;
      cut.linkage = detail::linkage_from(c.at("linkage").get<std::string>());
      if (!c.at("k").is_null()) cut.k = c.at("k").get<std::size_t>();
      if (!c.at("threshold").is_null()) cut.threshold = c.at("threshold").get<double>();
      cut.clusters = c.at("clusters").get<std::vector<std::vector<std::string>>>();
      r.cuts.push_back(std::move(cut));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed report JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::parse_error, std::string("report references unknown entity: ") + e.what());
  }
}

}  // namespace corrtree
