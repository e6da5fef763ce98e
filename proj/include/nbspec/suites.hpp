#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nbspec/graph.hpp"
#include "nbspec/linalg.hpp"

namespace nbspec {

struct RunConfig {
  std::vector<std::filesystem::path> graphs;
  double theta = 0.25;
  int depth = 4;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  std::vector<cplx> z_values;
  std::string format = "json";
  std::string out;

  /// Throws InvalidArgument on theta outside (0,1), depth < 2 or tol <= 0.
  void validate() const;
};

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::string graph;
  nlohmann::json data = nlohmann::json::object();
  std::vector<Assertion> assertions;

  void check(std::string name, bool ok, std::string detail = {});
  bool passed() const;
  nlohmann::json to_json() const;
};

nlohmann::json to_json(cplx z);

SuiteResult validate_suite(const Graph& g, const std::string& name);
SuiteResult spectrum_suite(const Graph& g, const std::string& name, const RunConfig& cfg);
SuiteResult correspond_suite(const Graph& g, const std::string& name, const RunConfig& cfg);
SuiteResult dual_suite(const Graph& g, const std::string& name, const RunConfig& cfg);
SuiteResult cover_suite(const Graph& g, const std::string& name, const RunConfig& cfg);
/// Planted Jordan structure on random adjoint pairs; graph independent.
SuiteResult synthetic_suite(const RunConfig& cfg, int cases = 100);
/// Eigenvalues of S with a Jordan block of size > 1.
SuiteResult jordan_scan(const Graph& g, const std::string& name, const RunConfig& cfg);

}  // namespace nbspec
