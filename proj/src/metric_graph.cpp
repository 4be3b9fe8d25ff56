#include "stratspec/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stratspec {

void MetricGraph::validate() const {
  std::set<std::string> vset(vertices.begin(), vertices.end());
  if (vset.size() != vertices.size())
    throw std::invalid_argument("MetricGraph: duplicate vertex id");
  std::set<std::string> eset;
  for (const auto& e : edges) {
    if (!eset.insert(e.id).second)
      throw std::invalid_argument("MetricGraph: duplicate edge id '" + e.id + "'");
    if (!vset.count(e.tail) || !vset.count(e.head))
      throw std::invalid_argument("MetricGraph: edge '" + e.id + "' references unknown vertex");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw std::invalid_argument("MetricGraph: edge '" + e.id + "': length must be positive");
  }
  // Isolated vertices carry no Hausdorff-1 mass; reject them.
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (valence(static_cast<int>(v)) == 0)
      throw std::invalid_argument("MetricGraph: isolated vertex '" + vertices[v] + "'");
}

int MetricGraph::vertex_index(const std::string& id) const {
  auto it = std::find(vertices.begin(), vertices.end(), id);
  if (it == vertices.end()) throw std::invalid_argument("unknown vertex '" + id + "'");
  return static_cast<int>(it - vertices.begin());
}

int MetricGraph::edge_index(const std::string& id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return static_cast<int>(i);
  throw std::invalid_argument("unknown edge '" + id + "'");
}

std::vector<int> MetricGraph::incident_edges(int v) const {
  std::vector<int> out;
  const std::string& id = vertices.at(v);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].tail == id || edges[i].head == id) out.push_back(static_cast<int>(i));
  return out;
}

int MetricGraph::valence(int v) const {
  const std::string& id = vertices.at(v);
  int n = 0;
  for (const auto& e : edges) {
    if (e.tail == id) ++n;
    if (e.head == id) ++n;
  }
  return n;
}

double MetricGraph::total_length() const {
  return std::accumulate(edges.begin(), edges.end(), 0.0,
                         [](double a, const GraphEdge& e) { return a + e.length; });
}

int MetricGraph::component_count() const {
  const int n = static_cast<int>(vertices.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    int a = find(vertex_index(e.tail)), b = find(vertex_index(e.head));
    if (a != b) parent[a] = b;
  }
  std::set<int> roots;
  for (int v = 0; v < n; ++v) roots.insert(find(v));
  return static_cast<int>(roots.size());
}

MetricGraph MetricGraph::from_json(const nlohmann::json& doc) {
  MetricGraph g;
  for (const auto& v : doc.at("vertices")) {
    if (v.is_string())
      g.vertices.push_back(v.get<std::string>());
    else
      g.vertices.push_back(v.dump());
  }
  for (const auto& e : doc.at("edges")) {
    GraphEdge ge;
    ge.id = e.at("id").is_string() ? e.at("id").get<std::string>() : e.at("id").dump();
    ge.tail = e.at("tail").is_string() ? e.at("tail").get<std::string>() : e.at("tail").dump();
    ge.head = e.at("head").is_string() ? e.at("head").get<std::string>() : e.at("head").dump();
    ge.length = e.at("length").get<double>();
    g.edges.push_back(std::move(ge));
  }
  g.validate();
  return g;
}

nlohmann::json MetricGraph::to_json() const {
  nlohmann::json doc;
  doc["vertices"] = vertices;
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : edges)
    doc["edges"].push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"length", e.length}});
  return doc;
}

std::pair<int, int> betti_numbers(const MetricGraph& g) {
  g.validate();
  const int b0 = g.component_count();
  const int b1 = static_cast<int>(g.edges.size()) - static_cast<int>(g.vertices.size()) + b0;
  return {b0, b1};
}

void EdgeProfile::validate() const {
  if (s.size() < 2 || s.size() != values.size())
    throw std::invalid_argument("EdgeProfile: need >= 2 nodes and matching value count");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1]))
      throw std::invalid_argument("EdgeProfile: nodes must be strictly increasing in s");
}

}  // namespace stratspec
