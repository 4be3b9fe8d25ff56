#include "stratspec/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stratspec {
namespace io {

namespace {

using nlohmann::json;

json cone_base_json(const cone::ConeBase& base) {
  if (const auto* g = std::get_if<MetricGraph>(&base)) return g->to_json();
  if (const auto* ps = std::get_if<cone::PointSetBase>(&base)) {
    json out;
    out["count"] = ps->count;
    if (!ps->distances.empty()) {
      json rows = json::array();
      for (const auto& row : ps->distances) {
        json r = json::array();
        for (double d : row) r.push_back(round_real(d));
        rows.push_back(r);
      }
      out["distances"] = rows;
    }
    return out;
  }
  const auto& spec = std::get<std::vector<double>>(base);
  json out = json::array();
  for (double mu : spec) out.push_back(round_real(mu));
  return out;
}

cone::ConeSpace parse_cone(const json& doc, const std::string& name) {
  if (!doc.contains("base") || !doc.contains("eps"))
    throw std::runtime_error(name + ": cone document needs 'base' and 'eps'");
  cone::ConeSpace space;
  const json& base = doc.at("base");
  if (base.is_array()) {
    space.base = base.get<std::vector<double>>();
    space.base_dim = doc.value("base_dim", 0);
  } else if (base.is_object() && base.contains("vertices")) {
    space.base = MetricGraph::from_json(base);
    space.base_dim = doc.value("base_dim", 1);
  } else if (base.is_object() && base.contains("count")) {
    cone::PointSetBase ps;
    ps.count = base.at("count").get<int>();
    if (base.contains("distances"))
      ps.distances = base.at("distances").get<std::vector<std::vector<double>>>();
    space.base = ps;
    space.base_dim = doc.value("base_dim", 0);
  } else {
    throw std::runtime_error(name + ": unrecognized cone base schema");
  }
  space.eps = doc.at("eps").get<double>();
  space.validate();
  return space;
}

SpaceDocument from_wrapper(const json& doc, const std::string& name) {
  SpaceDocument out;
  out.kind = doc.at("kind").get<std::string>();
  out.Lambda = doc.value("Lambda", 1.0);
  out.label = doc.value("label", "");
  if (out.Lambda < 1.0) throw std::runtime_error(name + ": Lambda must be >= 1");
  const json& payload = doc.contains("payload") ? doc.at("payload") : doc;
  if (out.kind == "graph") {
    out.graph = MetricGraph::from_json(payload);
    out.graph.validate();
  } else if (out.kind == "cone") {
    out.cone_space = parse_cone(payload, name);
  } else if (out.kind == "mesh") {
    if (!payload.is_string())
      throw std::runtime_error(name + ": mesh payload must be STRATOFF text");
    std::istringstream in(payload.get<std::string>());
    out.mesh = parse_stratoff(in);
    out.mesh.validate();
  } else {
    throw std::runtime_error(name + ": unknown kind '" + out.kind + "'");
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round_real(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

SpaceDocument parse_space(const std::string& text, const std::string& name) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::runtime_error(name + ": empty document");
  if (text.compare(first, 8, "STRATOFF") == 0) {
    SpaceDocument out;
    out.kind = "mesh";
    std::istringstream in(text);
    out.mesh = parse_stratoff(in);
    out.mesh.validate();
    return out;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  if (doc.contains("kind")) return from_wrapper(doc, name);
  // bare payloads
  json wrapped;
  if (doc.contains("vertices"))
    wrapped["kind"] = "graph";
  else if (doc.contains("base"))
    wrapped["kind"] = "cone";
  else
    throw std::runtime_error(name + ": cannot infer document kind");
  wrapped["payload"] = doc;
  if (doc.contains("Lambda")) wrapped["Lambda"] = doc.at("Lambda");
  return from_wrapper(wrapped, name);
}

SpaceDocument load_space(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str(), path);
}

std::string emit_space(const SpaceDocument& doc) {
  json out;
  out["kind"] = doc.kind;
  out["Lambda"] = round_real(doc.Lambda);
  if (!doc.label.empty()) out["label"] = doc.label;
  if (doc.kind == "graph") {
    out["payload"] = doc.graph.to_json();
  } else if (doc.kind == "cone") {
    json payload;
    payload["base"] = cone_base_json(doc.cone_space.base);
    payload["base_dim"] = doc.cone_space.base_dim;
    payload["eps"] = round_real(doc.cone_space.eps);
    out["payload"] = payload;
  } else if (doc.kind == "mesh") {
    std::ostringstream text;
    emit_stratoff(doc.mesh, text);
    out["payload"] = text.str();
  } else {
    throw std::runtime_error("emit_space: unknown kind '" + doc.kind + "'");
  }
  return out.dump(2) + "\n";
}

nlohmann::json spectrum_json(const SpectralResult& r) {
  json out;
  out["degree"] = r.degree;
  out["method"] = r.method;
  out["discretization"] = r.discretization;
  out["tolerance"] = round_real(r.tolerance);
  out["seed"] = r.seed;
  json list = json::array();
  for (const auto& e : r.eigenvalues) {
    json entry;
    entry["k"] = e.k;
    entry["lambda"] = round_real(e.lambda);
    entry["multiplicity"] = e.multiplicity;
    entry["residual"] = round_real(e.residual);
    if (e.merged) entry["merged"] = true;
    list.push_back(entry);
  }
  out["eigenvalues"] = list;
  return out;
}

std::string spectrum_csv(const SpectralResult& r, int degree) {
  std::ostringstream out;
  out << "p,k,lambda,multiplicity,residual\n";
  for (const auto& e : r.eigenvalues)
    out << degree << "," << e.k << "," << format_real(e.lambda) << "," << e.multiplicity << ","
        << format_real(e.residual) << "\n";
  return out.str();
}

std::string RunReport::serialize() const {
  json out;
  out["command"] = command;
  out["input_digest"] = input_digest;
  out["tool_version"] = tool_version;
  out["results"] = results;
  return out.dump(2) + "\n";
}

}  // namespace io
}  // namespace stratspec
