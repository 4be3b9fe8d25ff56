#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stratspec/io.hpp"
#include "stratspec/mesh_gen.hpp"

using namespace stratspec;
namespace fs = std::filesystem;

namespace {

const char* kCircleJson =
    R"({"vertices":["v"],"edges":[{"id":"e","tail":"v","head":"v","length":6.283185307179586}]})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("stratspec-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(STRATSPEC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("fixed-precision rendering") {
  CHECK(io::format_real(3.14159265358979323846) == "3.14159265359");
  CHECK(io::format_real(0.0) == "0");
  CHECK(io::format_real(-1.5e-12) == "-1.5e-12");
  const double r = io::round_real(1.0 / 3.0);
  CHECK(io::round_real(r) == r);
}

TEST_CASE("input digests are deterministic and collision-visible") {
  CHECK(io::digest("abc") == io::digest("abc"));
  CHECK(io::digest("abc") != io::digest("abd"));
  CHECK(io::digest("").size() == 16);
}

TEST_CASE("bare graph JSON loads as a graph document") {
  auto doc = io::parse_space(kCircleJson);
  CHECK(doc.kind == "graph");
  CHECK(doc.graph.edges.size() == 1);
  CHECK(doc.Lambda == 1.0);
}

TEST_CASE("negative edge length is rejected with a clear message") {
  const char* bad =
      R"({"vertices":["a","b"],"edges":[{"id":"e","tail":"a","head":"b","length":-1}]})";
  try {
    io::parse_space(bad);
    FAIL("expected a validation error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("length must be positive") != std::string::npos);
  }
}

TEST_CASE("dangling simplex reference is rejected with the offending index") {
  const char* bad =
      "STRATOFF\ndim 1\ncoorddim 1\nvertices 2\n0\n1\ncells 1\n2 0 5\n";
  try {
    io::parse_space(bad);
    FAIL("expected a validation error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("round-trip through emit_space for every kind") {
  io::SpaceDocument g;
  g.kind = "graph";
  g.graph = {{"a", "b"}, {{"e1", "a", "b", 1.5}, {"e2", "a", "b", 2.5}}};
  g.Lambda = 1.25;
  g.label = "theta-ish";

  io::SpaceDocument c;
  c.kind = "cone";
  c.cone_space.base = cone::PointSetBase{3, {}};
  c.cone_space.base_dim = 0;
  c.cone_space.eps = 0.5;

  io::SpaceDocument cg;
  cg.kind = "cone";
  cg.cone_space.base = MetricGraph{{"v"}, {{"e", "v", "v", 6.0}}};
  cg.cone_space.base_dim = 1;
  cg.cone_space.eps = 1.0;

  io::SpaceDocument cl;
  cl.kind = "cone";
  cl.cone_space.base = std::vector<double>{0.0, 1.0, 4.0};
  cl.cone_space.base_dim = 1;
  cl.cone_space.eps = 2.0;

  io::SpaceDocument m;
  m.kind = "mesh";
  m.mesh = mesh_gen::disk_mesh(2, 8, true);

  for (const auto& doc : {g, c, cg, cl, m}) {
    const std::string once = io::emit_space(doc);
    const std::string twice = io::emit_space(io::parse_space(once));
    CHECK(once == twice);
  }
}

TEST_CASE("bare STRATOFF text loads as a mesh document") {
  std::ostringstream text;
  emit_stratoff(mesh_gen::csaszar_torus(), text);
  auto doc = io::parse_space(text.str());
  CHECK(doc.kind == "mesh");
  CHECK(doc.mesh.count(2) == 14);
}

TEST_CASE("reports serialize without the wall time") {
  io::RunReport rep;
  rep.command = "spectrum";
  rep.input_digest = io::digest("x");
  rep.results = {{"ok", true}};
  rep.wall_seconds = 1.25;
  const std::string a = rep.serialize();
  rep.wall_seconds = 99.0;
  CHECK(rep.serialize() == a);
  CHECK(a.find("wall") == std::string::npos);
}

TEST_CASE("spectrum CSV has the documented columns") {
  SpectralResult r;
  r.eigenvalues = {{1, 0.0, 1, 0.0}, {2, 1.0, 2, 1e-14}};
  const std::string csv = io::spectrum_csv(r, 0);
  CHECK(csv.find("p,k,lambda,multiplicity,residual\n") == 0);
  CHECK(csv.find("0,2,1,2,1e-14\n") != std::string::npos);
}

TEST_CASE("cli: spectrum produces a CSV covering the requested count") {
  TempDir tmp;
  const auto input = tmp.path / "circle.json";
  std::ofstream(input) << kCircleJson;
  const auto log = tmp.path / "log.txt";
  const int rc = run_cli("spectrum --degree 0 --count 10 --out " + (tmp.path / "a").string() +
                             " " + input.string(),
                         log);
  CHECK(rc == 0);
  const std::string csv = slurp(tmp.path / "a" / "spectrum.csv");
  int total = 0;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', line.find(',', c1 + 1) + 1);
    total += std::stoi(line.substr(c2 + 1, line.find(',', c2 + 1) - c2 - 1));
  }
  CHECK(total >= 10);
}

TEST_CASE("cli: identical inputs and seeds give byte-identical reports") {
  TempDir tmp;
  const auto input = tmp.path / "torus.off";
  std::ofstream out(input);
  emit_stratoff(mesh_gen::torus_grid_2d(6), out);
  out.close();
  const auto log = tmp.path / "log.txt";
  for (const char* dir : {"r1", "r2"}) {
    const int rc = run_cli("spectrum --degree 0 --count 5 --seed 7 --out " +
                               (tmp.path / dir).string() + " " + input.string(),
                           log);
    REQUIRE(rc == 0);
  }
  CHECK(slurp(tmp.path / "r1" / "spectrum.json") == slurp(tmp.path / "r2" / "spectrum.json"));
  CHECK(slurp(tmp.path / "r1" / "spectrum.csv") == slurp(tmp.path / "r2" / "spectrum.csv"));
}

TEST_CASE("cli: hodge-check exit status reflects the verdict") {
  TempDir tmp;
  const auto eight = tmp.path / "eight.json";
  std::ofstream(eight)
      << R"({"vertices":["v"],"edges":[{"id":"a","tail":"v","head":"v","length":1.0},)"
      << R"({"id":"b","tail":"v","head":"v","length":2.0}]})";
  const auto log = tmp.path / "log.txt";
  CHECK(run_cli("hodge-check --out " + (tmp.path / "hc").string() + " " + eight.string(), log) ==
        0);
  const std::string table = slurp(log);
  CHECK(table.find("pass") != std::string::npos);
  CHECK(slurp(tmp.path / "hc" / "hodge_check.json").find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cli: certify emits a sound certificate with a comparison row") {
  TempDir tmp;
  const auto input = tmp.path / "torus.off";
  std::ofstream out(input);
  emit_stratoff(mesh_gen::torus_grid_2d(8), out);
  out.close();
  const auto log = tmp.path / "log.txt";
  const int rc = run_cli("certify --Lambda 1.5 --k 4 --degree 0 --out " +
                             (tmp.path / "c").string() + " " + input.string(),
                         log);
  CHECK(rc == 0);
  const std::string cert = slurp(tmp.path / "c" / "certificate.json");
  CHECK(cert.find("\"bound\"") != std::string::npos);
  CHECK(cert.find("\"sound\": true") != std::string::npos);
  CHECK(slurp(log).find("sound") != std::string::npos);
}

TEST_CASE("cli: ih on a stratified disk") {
  TempDir tmp;
  const auto input = tmp.path / "disk.off";
  std::ofstream out(input);
  emit_stratoff(mesh_gen::disk_mesh(2, 8, true), out);
  out.close();
  const auto log = tmp.path / "log.txt";
  CHECK(run_cli("ih --out " + (tmp.path / "i").string() + " " + input.string(), log) == 0);
  const std::string rep = slurp(tmp.path / "i" / "ih.json");
  CHECK(rep.find("\"0\": 1") != std::string::npos);
  CHECK(rep.find("\"2\": 0") != std::string::npos);
}

TEST_CASE("cli: bad inputs exit nonzero with an error category") {
  TempDir tmp;
  const auto log = tmp.path / "log.txt";
  CHECK(run_cli("spectrum " + (tmp.path / "missing.json").string(), log) == 2);
  CHECK(slurp(log).find("error:") != std::string::npos);
  CHECK(run_cli("frobnicate x.json", log) != 0);
}
