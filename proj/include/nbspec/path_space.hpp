#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nbspec/district_tree.hpp"
#include "nbspec/linalg.hpp"
#include "nbspec/operators.hpp"

namespace nbspec {

/// A function on paths that only depends on the first `depth` edges, stored
/// by its values on W_depth.
struct DependsFunction {
  int depth = 1;
  Vec values;
};

/// Preferred continuation: for each oriented edge, the successor with the
/// smallest index.
struct PreferredContinuation {
  std::vector<int> next;

  static PreferredContinuation smallest_successor(const Graph& g);
};

/// Number of common initial edges.
int shared_prefix(std::span<const int> a, std::span<const int> b);

/// θ^s with s the common prefix length; codes must have equal length.
double code_distance(std::span<const int> a, std::span<const int> b, double theta);

/// Square transfer matrix on D_n: row c', column d, entry 1 iff
/// d = e0 ⌢ (c' without its last edge) for a turn e0 ⌢ first(c').
/// At n = 1 this is the turn sum.
LabeledOperator transfer_matrix(const DistrictTree& tree, int n);

/// Transfer operator D_n -> D_{n-1} (rows W_{n-1}, columns W_n), n >= 2.
Mat transfer_step(const DistrictTree& tree, int n);

/// Lift D_n into D_{n+1}: rows W_{n+1}, columns W_n.
Mat embed(const DistrictTree& tree, int n);

/// Re-expresses f at a larger depth.
DependsFunction lift(const DistrictTree& tree, const DependsFunction& f, int depth);

/// Applies L once, D_n -> D_{n-1}.
DependsFunction apply_transfer(const DistrictTree& tree, const DependsFunction& f);

/// Largest |f(c) - f(c')| / θ^s over codes of the same island with
/// j <= s < depth(f) shared initial edges.
double lipschitz_seminorm(const DistrictTree& tree, const DependsFunction& f, int j,
                          double theta);

/// Reference implementation over all pairs; quadratic, for tests.
double lipschitz_seminorm_pairs(const DistrictTree& tree, const DependsFunction& f, int j,
                                double theta);

double sup_norm(const DependsFunction& f);
double inner_norm(const DistrictTree& tree, const DependsFunction& f, double theta);

/// Π_n as a map D_m -> D_n (rows W_n, columns W_m): the value at a code is
/// the value at its preferred continuation to length m.
Mat projection_pi(const DistrictTree& tree, int n, int m, const PreferredContinuation& pref);

/// Single-step projection D_{n+1} -> D_n.
Mat projection_step(const DistrictTree& tree, int n, const PreferredContinuation& pref);

/// Π_n f re-expressed at depth(f).
DependsFunction project(const DistrictTree& tree, const DependsFunction& f, int n,
                        const PreferredContinuation& pref);

/// max |Π_n L - L Π_{n+1}| as maps D_{n+2} -> D_n.
double commutation_residual(const DistrictTree& tree, int n, const PreferredContinuation& pref);

/// Uniform complex entries on the unit square.
DependsFunction random_function(const DistrictTree& tree, int depth, std::mt19937_64& rng);

struct ContractionReport {
  double theta = 0;
  int depth = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int sup_violations = 0;
  int seminorm_violations = 0;
  int iterated_violations = 0;
  int approximation_violations = 0;
  double worst_sup_ratio = 0;        // ‖Lf‖ / (q_max ‖f‖)
  double worst_seminorm_ratio = 0;   // c1(Lf) / (θ q_max c1(f))
  double worst_iterated_ratio = 0;   // ‖L^k f‖ / (P_k(θ^k c1(f) + ‖f‖))
  double worst_approx_ratio = 0;     // ‖L^k f - L^k Π_k f‖ / (P_k θ^k c1(f))
  bool passed() const {
    return sup_violations + seminorm_violations + iterated_violations +
               approximation_violations == 0;
  }
};

/// Checks the one-step bounds and the iterated bounds for k <= n-1 on random
/// functions in D_n.
ContractionReport verify_contraction_bounds(const DistrictTree& tree, double theta, int trials,
                                            int n, std::uint64_t seed);

struct LocConstReport {
  int depth = 0;
  int nonzero_count = 0;        // rank of T^depth
  int expected_count = 0;       // |E|
  double spectrum_mismatch = 0; // matched distance to spec(S)
  double max_variance = 0;      // within depth-1 districts, over nonzero eigenvectors
  bool passed = false;
};

LocConstReport loc_const_spectrum_check(const DistrictTree& tree, int n, double tol);

/// Max over depth-1 districts of the spread |v(c) - mean| of v within the
/// district, normalized by ‖v‖_∞.
double district_variance(const DistrictTree& tree, int n, const Vec& v);

}  // namespace nbspec
