#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nbspec/error.hpp"
#include "nbspec/graph.hpp"
#include "nbspec/suites.hpp"

namespace {

using nbspec::SuiteResult;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kTerminal = 2,
  kDisconnected = 3,
  kLoop = 4,
  kDuplicate = 5,
  kParse = 6,
  kTooLarge = 7,
  kAssertion = 8,
};

int exit_code(nbspec::ErrorCode code) {
  switch (code) {
    case nbspec::ErrorCode::TerminalVertex: return kTerminal;
    case nbspec::ErrorCode::Disconnected: return kDisconnected;
    case nbspec::ErrorCode::LoopEdge: return kLoop;
    case nbspec::ErrorCode::DuplicateEdge: return kDuplicate;
    case nbspec::ErrorCode::Parse: return kParse;
    case nbspec::ErrorCode::TooLarge: return kTooLarge;
    default: return kUsage;
  }
}

nbspec::cplx parse_z(const std::string& text) {
  std::istringstream in(text);
  double re = 0, im = 0;
  char comma = 0;
  in >> re;
  if (!in) throw nbspec::Error(nbspec::ErrorCode::InvalidArgument, "bad --z value '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) {
      throw nbspec::Error(nbspec::ErrorCode::InvalidArgument, "bad --z value '" + text + "'");
    }
  }
  std::string rest;
  if (in >> rest) throw nbspec::Error(nbspec::ErrorCode::InvalidArgument, "bad --z value '" + text + "'");
  return {re, im};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string complex_text(const nlohmann::json& z) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << z[0].get<double>();
  const double im = z[1].get<double>();
  os << (im < 0 ? " - " : " + ") << std::abs(im) << "i";
  return os.str();
}

void render_text(const SuiteResult& r, std::ostream& os) {
  os << "== " << r.suite << " : " << r.graph << "\n";
  const auto& d = r.data;
  if (r.suite == "validate") {
    os << d["vertices"] << " vertices, " << d["edges"] << " edges, "
       << (d["regular"].get<bool>() ? "regular q=" + d["q_max"].dump()
                                    : "degree " + d["degree_min"].dump() + ".." + d["degree_max"].dump() +
                                          ", q_max=" + d["q_max"].dump())
       << "\n";
  } else if (r.suite == "spectrum") {
    int total = 0;
    for (const auto& e : d["eigenvalues"]) total += e["algebraic"].get<int>();
    os << total << " eigenvalues, R = " << d["radius"].get<double>() << ", q_max = " << d["q_max"]
       << ", " << (d["regular"].get<bool>() ? "regular" : "non-regular") << ", resonance region |z| > "
       << d["essential_radius"].get<double>() << "\n";
    for (const auto& e : d["eigenvalues"]) {
      os << "  " << complex_text(e["value"]) << "  |z|=" << e["modulus"].get<double>()
         << "  alg=" << e["algebraic"] << " geo=" << e["geometric"]
         << (e["resonance"].get<bool>() ? "  resonance" : "") << "\n";
    }
  } else if (r.suite == "correspond") {
    for (const auto& row : d["correspondence"]) {
      os << "  " << complex_text(row["z"]) << "  x" << row["multiplicity"];
      if (row["excluded"].get<bool>()) {
        os << "  excluded\n";
      } else {
        os << "  dim S-eigenspace=" << row["dim_turn_eigenspace"]
           << " dim vertex equalizer=" << row["dim_vertex_equalizer"]
           << (row["passed"].get<bool>() ? "  matched" : "  MISMATCH") << "\n";
      }
    }
  } else if (r.suite == "dual" || r.suite == "cover") {
    for (const auto& row : d["eigenvalues"]) {
      os << "  " << complex_text(row["z"]) << "  dim=" << row["dimension"];
      if (r.suite == "dual") {
        os << " gram rank=" << row["gram_rank"] << " jordan=" << row["jordan_block"]
           << (row["degenerate"].get<bool>() ? "  degenerate" : "  non-degenerate");
      } else {
        os << " max deviation=" << row["max_deviation"].get<double>();
      }
      os << "\n";
    }
    if (r.suite == "cover") {
      const auto& c = d["cocycle"];
      os << "  cocycle as printed: " << c["printed_form_discrepancies"] << " of " << c["cocycle_checks"]
         << " samples disagree\n";
    }
  } else if (r.suite == "scan") {
    if (d["nontrivial_blocks"].empty()) os << "  no Jordan block of size > 1\n";
    for (const auto& h : d["nontrivial_blocks"]) {
      os << "  " << complex_text(h["z"]) << "  block " << h["max_block"] << "\n";
    }
  }
  for (const auto& a : r.assertions) {
    os << "  [" << (a.passed ? "PASS" : "FAIL") << "] " << a.name;
    if (!a.detail.empty()) os << "  " << a.detail;
    os << "\n";
  }
}

void emit(const std::string& command, const nbspec::RunConfig& cfg, const std::vector<SuiteResult>& results,
          std::ostream& os) {
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed();
  if (cfg.format == "json") {
    nlohmann::json zs = nlohmann::json::array();
    for (auto z : cfg.z_values) zs.push_back(nbspec::to_json(z));
    nlohmann::json graphs = nlohmann::json::array();
    for (const auto& p : cfg.graphs) graphs.push_back(p.string());
    nlohmann::json doc = {{"schema", "nbspec/1"},
                          {"command", command},
                          {"config",
                           {{"graphs", graphs},
                            {"theta", cfg.theta},
                            {"depth", cfg.depth},
                            {"tol", cfg.tol},
                            {"seed", cfg.seed},
                            {"z", zs}}},
                          {"results", nlohmann::json::array()},
                          {"passed", ok}};
    for (const auto& r : results) doc["results"].push_back(r.to_json());
    os << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << "suite,graph,assertion,passed,detail\n";
    for (const auto& r : results) {
      for (const auto& a : r.assertions) {
        os << r.suite << "," << csv_field(r.graph) << "," << a.name << "," << (a.passed ? "true" : "false")
           << "," << csv_field(a.detail) << "\n";
      }
    }
  } else {
    for (const auto& r : results) render_text(r, os);
    os << (ok ? "all assertions passed" : "assertion failures") << "\n";
  }
}

int run(const std::string& command, nbspec::RunConfig& cfg, const std::vector<std::string>& z_text) {
  for (const auto& t : z_text) cfg.z_values.push_back(parse_z(t));
  cfg.validate();
  if (cfg.graphs.empty() && command != "synthetic") {
    throw nbspec::Error(nbspec::ErrorCode::InvalidArgument, "at least one --graph is required");
  }

  std::vector<SuiteResult> results;
  for (const auto& path : cfg.graphs) {
    if (!std::ifstream(path)) throw std::runtime_error("cannot open " + path.string());
    const auto g = nbspec::load_graph_file(path);
    const std::string name = path.string();
    if (command == "validate" || command == "report") results.push_back(nbspec::validate_suite(g, name));
    if (command == "spectrum" || command == "report") results.push_back(nbspec::spectrum_suite(g, name, cfg));
    if (command == "correspond" || command == "report") {
      results.push_back(nbspec::correspond_suite(g, name, cfg));
    }
    if (command == "dual" || command == "report") results.push_back(nbspec::dual_suite(g, name, cfg));
    if (command == "cover" || command == "report") results.push_back(nbspec::cover_suite(g, name, cfg));
    if (command == "scan" || command == "report") results.push_back(nbspec::jordan_scan(g, name, cfg));
  }
  if (command == "synthetic" || command == "report") results.push_back(nbspec::synthetic_suite(cfg));

  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed();
  if (cfg.out.empty()) {
    emit(command, cfg, results, std::cout);
  } else {
    std::ofstream file(cfg.out);
    if (!file) throw nbspec::Error(nbspec::ErrorCode::InvalidArgument, "cannot write " + cfg.out);
    emit(command, cfg, results, file);
  }
  if (!ok) {
    for (const auto& r : results) {
      for (const auto& a : r.assertions) {
        if (!a.passed) std::cerr << "assertion failed: " << r.suite << "/" << a.name << " on " << r.graph << "\n";
      }
    }
  }
  return ok ? kOk : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-backtracking spectral correspondence on finite graphs"};
  app.require_subcommand(1);

  nbspec::RunConfig cfg;
  std::vector<std::string> graph_paths, z_text;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check a graph file and print its basic counts"},
      {"spectrum", "Eigenvalues of the turn operator, radius and pile heights"},
      {"correspond", "Edge/vertex eigenspace correspondence and transfer-operator checks"},
      {"dual", "Eigen-measures, transfer duality and degeneracy verdicts"},
      {"cover", "Universal cover, deck group, Poisson transform and diagram checks"},
      {"report", "Run every suite and the synthetic degeneracy check"},
      {"scan", "List eigenvalues with a Jordan block of size > 1"},
      {"synthetic", "Degeneracy test on random matrices with planted Jordan blocks"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--graph", graph_paths, "Edge-list file (repeatable)");
    sub->add_option("--theta", cfg.theta, "Contraction parameter in (0,1)")->capture_default_str();
    sub->add_option("--depth", cfg.depth, "Code depth for transfer operators")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Numerical tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--z", z_text, "Extra spectral parameter re,im (repeatable)")->allow_extra_args(false);
    sub->add_option("--format", cfg.format, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "Write output to a file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  for (const auto& p : graph_paths) cfg.graphs.emplace_back(p);
  try {
    return run(command, cfg, z_text);
  } catch (const nbspec::Error& e) {
    std::cerr << "error: " << nbspec::to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
