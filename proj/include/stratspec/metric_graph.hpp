#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace stratspec {

struct GraphEdge {
  std::string id;
  std::string tail;
  std::string head;
  double length = 0.0;
};

/// Finite oriented metric graph. Self-loops and parallel edges are allowed;
/// isolated vertices are rejected at validation.
struct MetricGraph {
  std::vector<std::string> vertices;
  std::vector<GraphEdge> edges;

  void validate() const;

  int vertex_index(const std::string& id) const;
  int edge_index(const std::string& id) const;
  std::vector<int> incident_edges(int v) const;  // each edge once, loops once
  int valence(int v) const;                      // endpoint slots at v, loops count twice
  double total_length() const;

  int component_count() const;

  static MetricGraph from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// b0 = connected components, b1 = E - V + b0.
std::pair<int, int> betti_numbers(const MetricGraph& g);

/// Function (or 1-form coefficient) sampled on one edge's nodes, ordered by
/// increasing oriented arclength s.
struct EdgeProfile {
  std::string edge_id;
  std::vector<double> s;
  std::vector<double> values;
  void validate() const;
};

struct VertexData {
  std::string vertex_id;
  double balance_residual = 0.0;  // sum_in f_e(v) - sum_out f_e(v)
  double flux = 0.0;              // common endpoint value F_v of omega_e
};

}  // namespace stratspec
