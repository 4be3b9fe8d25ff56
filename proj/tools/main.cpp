#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stratspec/cone.hpp"
#include "stratspec/graph_laplace.hpp"
#include "stratspec/io.hpp"
#include "stratspec/mesh_gen.hpp"
#include "stratspec/mesh_hodge.hpp"
#include "stratspec/minmax.hpp"
#include "stratspec/strata_ih.hpp"

using namespace stratspec;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string input;
  std::string out = ".";
  int degree = 0;
  int count = 10;
  int k = 1;
  double tol = 1e-10;
  double Lambda = 0.0;  // 0 means "use the document's chart constant"
  std::uint64_t seed = 0;
  std::string perversity;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("input", opt.input, "space document (JSON or STRATOFF)")->required();
  cmd->add_option("--degree", opt.degree, "form degree p");
  cmd->add_option("--count", opt.count, "number of eigenvalues");
  cmd->add_option("--tol", opt.tol, "solver tolerance");
  cmd->add_option("--seed", opt.seed, "iterative-solver seed");
  cmd->add_option("--out", opt.out, "output directory for artifacts");
  cmd->add_option("--Lambda", opt.Lambda, "chart biLipschitz constant");
  cmd->add_option("--k", opt.k, "eigenvalue index for certificates");
  cmd->add_option("--perversity", opt.perversity, "comma list overriding the default perversity");
}

SpectralResult truncate_to(const SpectralResult& r, int count) {
  SpectralResult out = r;
  out.eigenvalues.clear();
  int total = 0;
  for (const auto& e : r.eigenvalues) {
    if (total >= count) break;
    out.eigenvalues.push_back(e);
    total += e.multiplicity;
  }
  return out;
}

/// Degree-p spectrum of the document's Laplacian, lowest `count` values.
SpectralResult doc_spectrum(const io::SpaceDocument& doc, const Options& opt) {
  if (doc.kind == "graph") {
    if (opt.degree != 0)
      throw std::runtime_error("spectrum: metric graphs support --degree 0 only");
    double hi = 4.0;
    for (int round = 0;; ++round) {
      auto res = graph_laplace::secular_spectrum_0(doc.graph, -1.0, hi, opt.tol);
      if (res.count_below(hi) >= opt.count || round == 24) return truncate_to(res, opt.count);
      hi *= 2.0;
    }
  }
  if (doc.kind == "cone") {
    if (opt.degree != 0)
      throw std::runtime_error("spectrum: cone spaces support --degree 0 only");
    return cone::cone_graph_spectrum(doc.cone_space.base, doc.cone_space.eps, opt.count);
  }
  const auto& K = doc.mesh;
  auto C = mesh_hodge::build_complex(K);
  if (!K.boundary.empty()) C = mesh_hodge::apply_relative_bc(C, K);
  const int p = opt.degree;
  if (p < 0 || p > K.dim) throw std::runtime_error("spectrum: degree outside [0, dim]");
  SpectralResult qp;
  qp.degree = p;
  if (p < K.dim) qp = mesh_hodge::quotient_spectrum(C, p, opt.count, 1e-8, opt.seed);
  SpectralResult qpm1;
  qpm1.degree = p - 1;
  if (p > 0) qpm1 = mesh_hodge::quotient_spectrum(C, p - 1, opt.count, 1e-8, opt.seed);
  return truncate_to(mesh_hodge::hodge_assemble(qp, qpm1, mesh_hodge::harmonic_dim(C, p)),
                     opt.count);
}

void write_artifact(const Options& opt, const std::string& name, const std::string& bytes) {
  fs::create_directories(opt.out);
  std::ofstream out(fs::path(opt.out) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + name + " in " + opt.out);
  out << bytes;
}

std::string input_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return io::digest(buf.str());
}

int space_dim(const io::SpaceDocument& doc) {
  if (doc.kind == "graph") return 1;
  if (doc.kind == "cone") return doc.cone_space.base_dim + 1;
  return doc.mesh.dim;
}

strata_ih::Perversity pick_perversity(const Options& opt, int n) {
  if (opt.perversity.empty()) return strata_ih::gm_perversity(n);
  strata_ih::Perversity pv;
  std::istringstream in(opt.perversity);
  std::string tok;
  while (std::getline(in, tok, ',')) pv.values.push_back(std::stoi(tok));
  pv.validate();
  if (static_cast<int>(pv.values.size()) != n + 1)
    throw std::runtime_error("--perversity needs exactly dim+1 values");
  return pv;
}

strata_ih::IHResult doc_ih(const io::SpaceDocument& doc, const Options& opt) {
  StratifiedComplex K;
  if (doc.kind == "graph")
    K = mesh_gen::graph_complex(doc.graph);
  else if (doc.kind == "mesh")
    K = doc.mesh;
  else
    throw std::runtime_error("intersection homology needs a graph or mesh document");
  return strata_ih::ih_betti(strata_ih::stratify_multiconical(K),
                             pick_perversity(opt, K.dim));
}

int run_spectrum(const Options& opt) {
  auto doc = io::load_space(opt.input);
  auto res = doc_spectrum(doc, opt);
  const std::string csv = io::spectrum_csv(res, opt.degree);
  io::RunReport report;
  report.command = "spectrum";
  report.input_digest = input_digest(opt.input);
  report.results = io::spectrum_json(res);
  write_artifact(opt, "spectrum.csv", csv);
  write_artifact(opt, "spectrum.json", report.serialize());
  std::cout << csv;
  return 0;
}

int run_certify(const Options& opt) {
  auto doc = io::load_space(opt.input);
  const int n = space_dim(doc);
  const double Lambda = (opt.Lambda > 0.0) ? opt.Lambda : doc.Lambda;
  auto psi = minmax::bump_profile(n, opt.degree, 256);
  auto cert = minmax::certificate(Lambda, n, opt.degree, opt.k, psi);

  nlohmann::json cj;
  cj["k"] = cert.k;
  cj["p"] = cert.p;
  cj["bound"] = io::round_real(cert.bound);
  cj["Lambda"] = io::round_real(cert.Lambda);
  cj["c"] = cert.c;
  cj["E_psi"] = io::round_real(cert.energy);
  cj["N_psi"] = io::round_real(cert.quotient_sq);
  cj["provenance"] = cert.provenance;

  // comparison against the computed spectrum where a solver applies
  Options sopt = opt;
  sopt.count = opt.k + 8;
  double lambda_k = -1.0;
  try {
    auto lam = doc_spectrum(doc, sopt).flattened();
    std::vector<double> positive;
    for (double l : lam)
      if (l > 1e-8) positive.push_back(l);
    if (static_cast<int>(positive.size()) >= opt.k) lambda_k = positive[opt.k - 1];
  } catch (const std::exception&) {
    // no solver for this document kind and degree; certificate only
  }
  if (lambda_k >= 0.0) {
    cj["computed_lambda_k"] = io::round_real(lambda_k);
    cj["sound"] = (cert.bound >= lambda_k);
    std::cout << "k=" << opt.k << "  certificate=" << io::format_real(cert.bound)
              << "  computed=" << io::format_real(lambda_k) << "  "
              << (cert.bound >= lambda_k ? "sound" : "VIOLATED") << "\n";
  } else {
    std::cout << "k=" << opt.k << "  certificate=" << io::format_real(cert.bound) << "\n";
  }

  io::RunReport report;
  report.command = "certify";
  report.input_digest = input_digest(opt.input);
  report.results = cj;
  write_artifact(opt, "certificate.json", report.serialize());
  return 0;
}

int run_ih(const Options& opt) {
  auto doc = io::load_space(opt.input);
  auto ih = doc_ih(doc, opt);
  nlohmann::json rj;
  for (const auto& [deg, b] : ih.betti) rj["betti"][std::to_string(deg)] = b;
  rj["perversity"] = ih.perversity;
  rj["fingerprint"] = ih.fingerprint;
  io::RunReport report;
  report.command = "ih";
  report.input_digest = input_digest(opt.input);
  report.results = rj;
  write_artifact(opt, "ih.json", report.serialize());
  std::cout << "degree  IH rank\n";
  for (const auto& [deg, b] : ih.betti) std::cout << "  " << deg << "      " << b << "\n";
  return 0;
}

int run_hodge_check(const Options& opt) {
  auto doc = io::load_space(opt.input);
  std::vector<int> dims;
  if (doc.kind == "graph") {
    dims = strata_ih::graph_kernel_dims(doc.graph);
  } else if (doc.kind == "mesh") {
    auto C = mesh_hodge::build_complex(doc.mesh);
    if (!doc.mesh.boundary.empty()) C = mesh_hodge::apply_relative_bc(C, doc.mesh);
    for (int p = 0; p <= doc.mesh.dim; ++p) dims.push_back(mesh_hodge::harmonic_dim(C, p));
  } else {
    throw std::runtime_error("hodge-check needs a graph or mesh document");
  }
  auto rep = strata_ih::hodge_cross_check(dims, doc_ih(doc, opt));

  nlohmann::json rj;
  rj["pass"] = rep.pass;
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["degree"] = row.degree;
    r["kernel_dim"] = row.kernel_dim;
    r["ih_degree"] = row.ih_degree;
    r["ih_rank"] = row.ih_rank;
    r["pass"] = row.pass;
    rj["rows"].push_back(r);
  }
  io::RunReport report;
  report.command = "hodge-check";
  report.input_digest = input_digest(opt.input);
  report.results = rj;
  write_artifact(opt, "hodge_check.json", report.serialize());
  std::cout << rep.table();
  return rep.pass ? 0 : 1;
}

int run_weyl(const Options& opt) {
  auto doc = io::load_space(opt.input);
  Options sopt = opt;
  sopt.count = std::max(opt.count, 30);
  auto lam = doc_spectrum(doc, sopt).flattened();
  SpectralResult positive;
  for (double l : lam)
    if (l > 1e-8)
      positive.eigenvalues.push_back(
          {static_cast<int>(positive.eigenvalues.size()) + 1, l, 1, 0.0});
  const int k_hi = static_cast<int>(positive.eigenvalues.size());
  auto [expo, cst] = minmax::weyl_fit(positive, std::min(10, k_hi / 2), k_hi);
  nlohmann::json rj;
  rj["exponent"] = io::round_real(expo);
  rj["constant"] = io::round_real(cst);
  rj["k_hi"] = k_hi;
  io::RunReport report;
  report.command = "weyl";
  report.input_digest = input_digest(opt.input);
  report.results = rj;
  write_artifact(opt, "weyl.json", report.serialize());
  std::cout << "exponent=" << io::format_real(expo) << "  constant=" << io::format_real(cst)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral laboratory for stratified spaces"};
  app.require_subcommand(1);
  Options opt;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the form Laplacian");
  auto* certify = app.add_subcommand("certify", "minmax upper bound for lambda_k");
  auto* ih = app.add_subcommand("ih", "intersection homology Betti numbers");
  auto* hodge = app.add_subcommand("hodge-check", "kernel dimensions vs intersection homology");
  auto* weyl = app.add_subcommand("weyl", "power-law fit of the eigenvalue growth");
  for (auto* cmd : {spectrum, certify, ih, hodge, weyl}) add_common(cmd, opt);

  CLI11_PARSE(app, argc, argv);
  const auto t0 = std::chrono::steady_clock::now();
  int status = 2;
  try {
    if (spectrum->parsed()) status = run_spectrum(opt);
    if (certify->parsed()) status = run_certify(opt);
    if (ih->parsed()) status = run_ih(opt);
    if (hodge->parsed()) status = run_hodge_check(opt);
    if (weyl->parsed()) status = run_weyl(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;
  std::cerr << "wall " << io::format_real(wall.count()) << "s\n";
  return status;
}
