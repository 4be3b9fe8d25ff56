#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "stratspec/cone.hpp"
#include "stratspec/mesh.hpp"
#include "stratspec/metric_graph.hpp"
#include "stratspec/spectral_result.hpp"

namespace stratspec {
namespace io {

inline constexpr const char* kToolVersion = "stratspec 1.0.0";

/// Fixed 12-significant-digit rendering used for every floating value that
/// reaches an artifact, so reports are byte-identical across runs.
std::string format_real(double x);

/// Round through the fixed rendering, for values stored as JSON numbers.
double round_real(double x);

/// FNV-1a (64-bit) of the raw input bytes, as a hex string.
std::string digest(const std::string& bytes);

/// One input space of any supported kind, plus chart metadata.
struct SpaceDocument {
  std::string kind;  // "graph" | "cone" | "mesh"
  MetricGraph graph;
  cone::ConeSpace cone_space;
  StratifiedComplex mesh;
  double Lambda = 1.0;
  std::string label;
};

/// Parse a document from text: a JSON wrapper {"kind", "payload", ...}, a
/// bare graph or cone JSON object, or bare STRATOFF text.
SpaceDocument parse_space(const std::string& text, const std::string& name = "<memory>");
SpaceDocument load_space(const std::string& path);

/// Canonical wrapper-JSON form; load_space(emit_space(doc)) round-trips.
std::string emit_space(const SpaceDocument& doc);

nlohmann::json spectrum_json(const SpectralResult& r);

/// CSV rows "p,k,lambda,multiplicity,residual" with a header line.
std::string spectrum_csv(const SpectralResult& r, int degree);

struct RunReport {
  std::string command;
  std::string input_digest;
  std::string tool_version = kToolVersion;
  double wall_seconds = 0.0;  // printed to the log, kept out of the artifact
  nlohmann::json results;

  /// Deterministic artifact: identical inputs and seeds give identical bytes
  /// (which is why the wall time stays out of it).
  std::string serialize() const;
};

}  // namespace io
}  // namespace stratspec
