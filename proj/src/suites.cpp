#include "nbspec/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nbspec/cover.hpp"
#include "nbspec/district_tree.hpp"
#include "nbspec/error.hpp"
#include "nbspec/measures.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/path_space.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

constexpr int kMeasureDepth = 6;
constexpr double kIdentityTol = 1e-10;
constexpr double kExactTol = 1e-10;
constexpr double kRoundTripTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::vector<cplx> random_annulus(int count, double r_min, double r_max, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(r_min, r_max), angle(0.0, 6.283185307179586);
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) {
    double r = radius(rng);
    out.push_back(std::polar(r, angle(rng)));
  }
  return out;
}

Mat shift(const Mat& a, cplx z) { return a - z * Mat::Identity(a.rows(), a.cols()); }

std::vector<cplx> distinct_eigenvalues(const Graph& g) {
  std::vector<cplx> out;
  for (auto [z, mult] : cluster_values(eigenvalues(turn_sum(g).matrix), kDefaultClusterTol)) {
    out.push_back(z);
  }
  return out;
}

// Edge functions built from the depth-1 level of a measure and back.
double measure_round_trip(const std::shared_ptr<const DistrictTree>& tree, const MeasureTable& mu,
                          cplx z) {
  const Vec f = canonical_transpose(mu, z);
  const auto again = measure_from_edge_function(tree, f, z, mu.depth());
  double worst = 0;
  for (int n = 1; n <= mu.depth(); ++n) worst = std::max(worst, max_abs(again.level(n) - mu.level(n)));
  return worst / std::max(1.0, mu.max_abs());
}

}  // namespace

void RunConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
  if (depth < 2) throw Error(ErrorCode::InvalidArgument, "depth must be >= 2");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (format != "json" && format != "csv" && format != "text") {
    throw Error(ErrorCode::InvalidArgument, "format must be json, csv or text");
  }
}

void SuiteResult::check(std::string name, bool ok, std::string detail) {
  assertions.push_back({std::move(name), ok, std::move(detail)});
}

bool SuiteResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& a : assertions) {
    checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  }
  return {{"suite", suite}, {"graph", graph}, {"data", data}, {"assertions", checks},
          {"passed", passed()}};
}

nlohmann::json to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

SuiteResult validate_suite(const Graph& g, const std::string& name) {
  SuiteResult r{"validate", name, {}, {}};
  int dmin = g.degree(0), dmax = g.degree(0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    dmin = std::min(dmin, g.degree(v));
    dmax = std::max(dmax, g.degree(v));
  }
  r.data = {{"vertices", g.vertex_count()},
            {"edges", g.undirected_edge_count()},
            {"oriented_edges", g.edge_count()},
            {"degree_min", dmin},
            {"degree_max", dmax},
            {"q_max", g.q_max()},
            {"regular", g.is_regular()}};
  bool involution = true;
  for (int e = 0; e < g.edge_count(); ++e) {
    involution = involution && g.opposite(g.opposite(e)) == e && g.init(g.opposite(e)) == g.term(e) &&
                 g.opposite(e) != e;
  }
  r.check("opposite_involution", involution);
  bool turn_counts = true;
  for (int e = 0; e < g.edge_count(); ++e) {
    turn_counts = turn_counts && static_cast<int>(turns_into(g, e).size()) == g.q(g.init(e));
  }
  r.check("turn_counts", turn_counts, "|turns into e| = q(init e)");
  return r;
}

SuiteResult spectrum_suite(const Graph& g, const std::string& name, const RunConfig& cfg) {
  SuiteResult r{"spectrum", name, {}, {}};
  const auto s = turn_sum(g);
  const auto report = spectrum(s);
  const auto piles = pile_heights(g, 12);
  const double radius = report.spectral_radius();
  const double essential = cfg.theta * radius;

  nlohmann::json eig = nlohmann::json::array();
  bool geo_ok = true;
  for (const auto& c : report.clusters) {
    eig.push_back({{"value", to_json(c.value)},
                   {"modulus", std::abs(c.value)},
                   {"algebraic", c.algebraic},
                   {"geometric", c.geometric},
                   {"max_block", c.max_block},
                   {"resonance", std::abs(c.value) > essential}});
    geo_ok = geo_ok && c.geometric <= c.algebraic;
  }
  r.data = {{"eigenvalues", eig},
            {"radius", radius},
            {"q_max", g.q_max()},
            {"regular", g.is_regular()},
            {"theta", cfg.theta},
            {"essential_radius", essential},
            {"pile_heights", piles.heights},
            {"pile_roots", piles.roots},
            {"gelfand_deviation_decreasing_last4", piles.deviation_decreasing_last4}};

  r.check("multiplicity_sum", report.dimension() == g.edge_count());
  r.check("geometric_le_algebraic", geo_ok);

  auto ev = eigenvalues(s.matrix);
  auto evt = eigenvalues(s.matrix.transpose());
  double mismatch = 0;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    double best = 1e300;
    for (cplx w : evt) best = std::min(best, std::abs(w - ev[k]));
    mismatch = std::max(mismatch, best);
  }
  r.check("transpose_spectrum", mismatch <= kDefaultClusterTol, fmt(mismatch));

  if (g.is_regular()) {
    r.check("regularity_dichotomy", std::abs(radius - g.q_max()) <= 1e-10,
            "R = q_max = " + std::to_string(g.q_max()));
  } else {
    r.check("regularity_dichotomy", radius < g.q_max() - 1e-10,
            "R = " + fmt(radius) + " < q_max = " + std::to_string(g.q_max()));
  }
  r.check("submultiplicative", piles.submultiplicative);
  r.check("pile_roots_bound_radius", piles.bounded_below_by_radius);
  r.check("gelfand_trend", piles.deviation_shrinks);
  r.check("turn_sum_injective", numerical_rank(s.matrix, kDefaultRankTol) == g.edge_count());
  return r;
}

SuiteResult correspond_suite(const Graph& g, const std::string& name, const RunConfig& cfg) {
  SuiteResult r{"correspond", name, {}, {}};
  std::mt19937_64 rng(cfg.seed);

  auto zs = random_annulus(20, 0.1, 5.0, rng);
  zs.insert(zs.end(), cfg.z_values.begin(), cfg.z_values.end());
  double worst = 0;
  int near_unit = 0;
  for (cplx z : zs) {
    auto res = verify_operator_identity(g, z, kIdentityTol);
    worst = std::max(worst, res.residual);
    near_unit += res.near_unit;
  }
  r.data["operator_identity"] = {{"samples", zs.size()}, {"max_residual", worst}, {"near_unit", near_unit}};
  r.check("operator_identity", worst <= kIdentityTol, fmt(worst));

  nlohmann::json rows = nlohmann::json::array();
  bool all_ok = true, tweak_ok = true;
  std::vector<std::pair<cplx, int>> targets =
      cluster_values(eigenvalues(turn_sum(g).matrix), kDefaultClusterTol);
  for (cplx z : cfg.z_values) targets.emplace_back(z, 0);
  for (auto [z, mult] : targets) {
    if (is_excluded(z)) {
      rows.push_back({{"z", to_json(z)}, {"multiplicity", mult}, {"excluded", true}});
      continue;
    }
    auto c = correspondence_report(g, z, cfg.tol);
    int tweak_dim = static_cast<int>(equalizer_basis(neighbor_avg(g), local_tweak(g, z), cfg.tol).cols());
    tweak_ok = tweak_ok && tweak_dim == c.dim_vertex_equalizer;
    rows.push_back({{"z", to_json(z)},
                    {"multiplicity", mult},
                    {"excluded", false},
                    {"dim_turn_eigenspace", c.dim_turn_eigenspace},
                    {"dim_vertex_equalizer", c.dim_vertex_equalizer},
                    {"dim_average_equalizer", tweak_dim},
                    {"gradient_bijectivity_residual", c.gradient_bijectivity_residual},
                    {"inverse_composition_residual", c.inverse_composition_residual},
                    {"section_residual", c.section_residual},
                    {"passed", c.passed}});
    all_ok = all_ok && c.passed;
  }
  r.data["correspondence"] = rows;
  r.check("eigenspace_correspondence", all_ok);
  r.check("average_equalizer_matches", tweak_ok);

  const int depth = std::min(cfg.depth, DistrictTree::kMaxDepth);
  auto tree = std::make_shared<const DistrictTree>(g, depth);
  nlohmann::json lc = nlohmann::json::array();
  bool lc_ok = true;
  for (int n = 1; n <= depth; ++n) {
    auto rep = loc_const_spectrum_check(*tree, n, cfg.tol);
    lc.push_back({{"depth", n},
                  {"nonzero_eigenvalues", rep.nonzero_count},
                  {"spectrum_mismatch", rep.spectrum_mismatch},
                  {"max_district_variance", rep.max_variance},
                  {"passed", rep.passed}});
    lc_ok = lc_ok && rep.passed;
  }
  r.data["locally_constant"] = lc;
  r.check("locally_constant_reduction", lc_ok);

  auto cb = verify_contraction_bounds(*tree, cfg.theta, 100, depth, cfg.seed);
  r.data["contraction"] = {{"theta", cfg.theta},
                           {"trials", cb.trials},
                           {"seed", cb.seed},
                           {"worst_sup_ratio", cb.worst_sup_ratio},
                           {"worst_seminorm_ratio", cb.worst_seminorm_ratio},
                           {"worst_iterated_ratio", cb.worst_iterated_ratio},
                           {"worst_approximation_ratio", cb.worst_approx_ratio}};
  r.check("contraction_bounds", cb.passed());

  const auto pref = PreferredContinuation::smallest_successor(g);
  double comm = 0;
  for (int n = 1; n + 2 <= depth; ++n) comm = std::max(comm, commutation_residual(*tree, n, pref));
  r.data["commutation_residual"] = comm;
  r.check("projection_commutes", comm == 0.0, fmt(comm));

  std::mt19937_64 frng(cfg.seed + 1);
  bool proj_ok = true;
  for (int t = 0; t < 20; ++t) {
    auto f = random_function(*tree, depth, frng);
    const double c0 = lipschitz_seminorm(*tree, f, 0, cfg.theta);
    for (int k = 1; k < depth; ++k) {
      auto p = project(*tree, f, k, pref);
      const double gap = max_abs(f.values - p.values);
      proj_ok = proj_ok && gap <= std::pow(cfg.theta, k) * c0 * (1 + 1e-12);
    }
  }
  r.check("projection_distance", proj_ok, "|f - P_k f| <= theta^k c0(f)");
  return r;
}

SuiteResult dual_suite(const Graph& g, const std::string& name, const RunConfig& cfg) {
  SuiteResult r{"dual", name, {}, {}};
  auto tree = std::make_shared<const DistrictTree>(g, kMeasureDepth);
  const DistrictTree small(g, 3);
  const Mat s = turn_sum(g).matrix;
  const Mat dual3 = transfer_matrix(small, 3).matrix.transpose();

  nlohmann::json rows = nlohmann::json::array();
  double additivity = 0, eigen_res = 0, round_trip = 0, rank_one = 0;
  bool dims_ok = true, verdicts_agree = true, forms_ok = true;
  std::mt19937_64 rng(cfg.seed);
  nlohmann::json extension = nlohmann::json::array();
  bool extension_ok = true;

  for (cplx z : distinct_eigenvalues(g)) {
    const Mat basis = null_space(shift(s, z), kDefaultRankTol);
    const int dual_dim = static_cast<int>(null_space(shift(dual3, z), kDefaultRankTol).cols());
    dims_ok = dims_ok && dual_dim == basis.cols();
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      auto mu = measure_from_edge_function(tree, basis.col(j), z, kMeasureDepth, cfg.tol);
      const double scale = std::max(1.0, mu.max_abs());
      additivity = std::max(additivity, mu.additivity_residual() / scale);
      eigen_res = std::max(eigen_res, dual_eigen_residual(mu, z) / scale);
      round_trip = std::max(round_trip, measure_round_trip(tree, mu, z));
      for (int n = 1; n <= mu.depth(); ++n) {
        for (int i = 0; i < tree->size(n); ++i) {
          cplx expected = std::pow(z, 1 - n) * mu.value(1, tree->last_edge(n, i));
          rank_one = std::max(rank_one, std::abs(mu.value(n, i) - expected) / scale);
        }
      }
      if (j == 0 && std::abs(z) > cfg.theta * g.q_max()) {
        auto ext = extension_bound_check(mu, z, cfg.theta, std::min(4, kMeasureDepth), 20, rng);
        extension.push_back({{"z", to_json(z)}, {"worst_ratio", ext.worst_ratio}, {"violations", ext.violations}});
        extension_ok = extension_ok && ext.violations == 0;
      }
    }
    auto verdict = degeneracy_test(g, z, cfg.tol);
    verdicts_agree = verdicts_agree && verdict.agrees;
    forms_ok = forms_ok && verdict.form_residual <= kExactTol;
    rows.push_back({{"z", to_json(z)},
                    {"dimension", verdict.dimension},
                    {"dual_dimension", dual_dim},
                    {"gram_rank", verdict.gram_rank},
                    {"degenerate", verdict.degenerate},
                    {"jordan_block", verdict.jordan_block},
                    {"agrees", verdict.agrees}});
  }
  r.data["eigenvalues"] = rows;
  r.data["measure_depth"] = kMeasureDepth;
  r.data["max_additivity_residual"] = additivity;
  r.data["max_dual_eigen_residual"] = eigen_res;
  r.data["max_round_trip_residual"] = round_trip;
  r.data["extension_bound"] = extension;
  r.check("dual_dimension_matches", dims_ok);
  r.check("additivity", additivity <= kExactTol, fmt(additivity));
  r.check("dual_eigen_relation", eigen_res <= kExactTol, fmt(eigen_res));
  r.check("canonical_round_trip", round_trip <= kRoundTripTol, fmt(round_trip));
  r.check("rank_one_structure", rank_one <= kExactTol, fmt(rank_one));
  r.check("degeneracy_matches_jordan", verdicts_agree);
  r.check("gram_matches_edge_form", forms_ok);
  r.check("extension_bound", extension_ok);

  for (cplx z : cfg.z_values) {
    if (std::abs(z) < 1e-12) continue;
    const int dim = static_cast<int>(null_space(shift(s, z), kDefaultRankTol).cols());
    const int ddim = static_cast<int>(null_space(shift(dual3, z), kDefaultRankTol).cols());
    r.data["config_z"].push_back({{"z", to_json(z)}, {"dimension", dim}, {"dual_dimension", ddim}});
    dims_ok = dims_ok && dim == ddim;
  }
  r.check("config_z_dimensions", dims_ok);

  auto duality = transfer_duality_check(tree, kMeasureDepth, 50, cfg.seed);
  r.data["duality"] = {{"indicator_checks", duality.indicator_checks},
                       {"indicator_failures", duality.indicator_failures},
                       {"max_residual", duality.max_duality_residual},
                       {"representation_residual", duality.max_representation_residual}};
  r.check("transfer_duality", duality.passed(kExactTol), fmt(duality.max_duality_residual));

  const double sym = edge_form_symmetry_residual(g, 20, rng);
  r.data["edge_form_symmetry_residual"] = sym;
  r.check("edge_form_symmetry", sym <= kExactTol, fmt(sym));
  return r;
}

SuiteResult cover_suite(const Graph& g, const std::string& name, const RunConfig& cfg) {
  SuiteResult r{"cover", name, {}, {}};
  const int depth = std::clamp(cfg.depth + 1, 3, DistrictTree::kMaxDepth);
  std::mt19937_64 rng(cfg.seed);

  const TruncatedCover cover(g, 0, depth);
  std::vector<int> level_sizes;
  bool children_ok = true;
  for (int n = 0; n <= depth; ++n) {
    auto [lo, hi] = cover.level_range(n);
    level_sizes.push_back(hi - lo);
    for (int v = lo; v < hi && n < depth; ++v) {
      int expected = n == 0 ? g.degree(cover.base()) : g.q(cover.projection(v));
      children_ok = children_ok && static_cast<int>(cover.children(v).size()) == expected;
    }
  }
  r.data["depth"] = depth;
  r.data["level_sizes"] = level_sizes;
  r.check("cover_child_counts", children_ok);

  const auto gens = deck_generators(g, 0);
  nlohmann::json loops = nlohmann::json::array();
  for (const auto& l : gens.loops) loops.push_back(l);
  r.data["generators"] = loops;
  const int expected_rank = g.undirected_edge_count() - g.vertex_count() + 1;
  r.check("generator_rank", gens.rank() == expected_rank, std::to_string(gens.rank()));

  auto autos = verify_deck_automorphisms(cover, gens);
  r.data["automorphism_edges_checked"] = autos.edges_checked;
  r.check("deck_automorphisms", autos.failures == 0);

  const auto eigen = distinct_eigenvalues(g);
  cplx probe(0.7, 0.3);
  for (cplx z : eigen) {
    if (!is_excluded(z)) {
      probe = z;
      break;
    }
  }
  const TruncatedCover deep(g, 0, intertwining_depth(g, gens));
  const auto deep_nu = random_boundary_measure(deep, rng);
  auto cocycle = verify_cocycle_identities(deep, gens, probe, 20, rng, &deep_nu);
  r.data["cocycle"] = {{"horocycle_checks", cocycle.horocycle_checks},
                       {"cocycle_checks", cocycle.cocycle_checks},
                       {"printed_form_discrepancies", cocycle.printed_cocycle_failures},
                       {"intertwining_checks", cocycle.intertwining_checks},
                       {"intertwining_skipped", cocycle.intertwining_skipped},
                       {"intertwining_residual", cocycle.intertwining_residual},
                       {"cover_depth", deep.depth()}};
  r.check("horocycle_identity", cocycle.horocycle_failures == 0);
  r.check("cocycle_identity", cocycle.cocycle_failures == 0);
  r.check("intertwining", cocycle.intertwining_residual <= cfg.tol && cocycle.intertwining_checks > 0,
          fmt(cocycle.intertwining_residual));

  auto zs = random_annulus(5, 0.5, 3.0, rng);
  zs.insert(zs.end(), cfg.z_values.begin(), cfg.z_values.end());
  double eq_res = 0, bv_res = 0, inv_res = 0, lin_res = 0;
  for (cplx z : zs) {
    if (is_excluded(z)) continue;
    const auto nu = random_boundary_measure(cover, rng);
    const auto f = poisson_all(cover, nu, z, depth - 1);
    eq_res = std::max(eq_res, tree_equalizer_residual(cover, f, z));
    const auto back = boundary_values(cover, f, z, depth - 1);
    const auto again = poisson_all(cover, back, z, depth - 2);
    for (int v = 0; v < cover.vertex_count(); ++v) {
      if (cover.level(v) <= depth - 1) {
        bv_res = std::max(bv_res, std::abs(back.values[v] - nu.values[v]) / std::max(1.0, std::abs(nu.values[v])));
      }
      if (cover.level(v) <= depth - 2) {
        inv_res = std::max(inv_res, std::abs(again[v] - f[v]) / std::max(1.0, std::abs(f[v])));
      }
    }
    const auto nu2 = random_boundary_measure(cover, rng);
    BoundaryMeasure mix;
    const cplx a(0.3, -1.1), b(2.0, 0.5);
    for (std::size_t v = 0; v < nu.values.size(); ++v) mix.values.push_back(a * nu.values[v] + b * nu2.values[v]);
    for (int v = 0; v < std::min(10, cover.vertex_count()) && cover.level(v) <= depth - 1; ++v) {
      cplx lhs = poisson_transform(cover, mix, z, v);
      cplx rhs = a * poisson_transform(cover, nu, z, v) + b * poisson_transform(cover, nu2, z, v);
      lin_res = std::max(lin_res, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  r.data["random_measure_checks"] = {{"equalizer_residual", eq_res},
                                     {"boundary_round_trip", bv_res},
                                     {"poisson_round_trip", inv_res},
                                     {"linearity", lin_res}};
  r.check("poisson_equalizer", eq_res <= cfg.tol, fmt(eq_res));
  r.check("boundary_round_trip", std::max(bv_res, inv_res) <= cfg.tol, fmt(std::max(bv_res, inv_res)));
  r.check("poisson_linearity", lin_res <= kExactTol, fmt(lin_res));

  auto tree = std::make_shared<const DistrictTree>(g, depth);
  const Mat s = turn_sum(g).matrix;
  nlohmann::json rows = nlohmann::json::array();
  bool diagram_ok = true, twisted_ok = true, control_ok = true;
  for (cplx z : eigen) {
    if (is_excluded(z)) continue;
    auto d = diagram_check(g, z, depth, cfg.tol);
    diagram_ok = diagram_ok && d.passed;

    const Mat basis = null_space(shift(s, z), kDefaultRankTol);
    TwistedInvarianceReport tw;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      auto mu = measure_from_edge_function(tree, basis.col(j), z, depth);
      auto part = twisted_invariance(cover, gens, restriction(mu, cover), z, cfg.tol);
      tw.checked += part.checked;
      tw.violations += part.violations;
      tw.max_residual = std::max(tw.max_residual, part.max_residual);
    }
    twisted_ok = twisted_ok && tw.violations == 0 && tw.checked > 0;
    rows.push_back({{"z", to_json(z)},
                    {"dimension", d.dimension},
                    {"bases_checked", d.bases_checked},
                    {"vertices_checked", d.vertices_checked},
                    {"max_deviation", d.max_deviation},
                    {"equalizer_residual", d.equalizer_residual},
                    {"reconstruction_error", d.reconstruction_error},
                    {"restriction_rank", d.restriction_rank},
                    {"twisted_checks", tw.checked},
                    {"twisted_max_residual", tw.max_residual}});
  }
  // Away from the spectrum only the zero measure is invariant.
  const cplx generic(0.9, 0.4);
  auto control = twisted_invariance(cover, gens, random_boundary_measure(cover, rng), generic, cfg.tol);
  control_ok = control.checked > 0 && control.violations > 0;
  r.data["control"] = {{"z", to_json(generic)}, {"checked", control.checked}, {"violations", control.violations}};
  r.data["eigenvalues"] = rows;
  r.check("diagram_commutes", diagram_ok);
  r.check("twisted_invariance", twisted_ok);
  r.check("twisted_negative_control", control_ok);
  return r;
}

SuiteResult synthetic_suite(const RunConfig& cfg, int cases) {
  SuiteResult r{"synthetic", "-", {}, {}};
  std::mt19937_64 rng(cfg.seed);
  int with_block = 0, mismatches = 0;
  for (int k = 0; k < cases; ++k) {
    auto pair = make_planted_pair(rng);
    auto v = synthetic_degeneracy(pair);
    const bool planted = pair.max_block() >= 2;
    with_block += planted;
    const bool ok = v.degenerate_on_eigen() == planted && !v.degenerate_on_generalized() &&
                    v.jordan == pair.max_block() && v.jordan_dual == pair.max_block();
    if (!ok) ++mismatches;
  }
  r.data = {{"cases", cases}, {"with_nontrivial_block", with_block}, {"mismatches", mismatches},
            {"seed", cfg.seed}};
  r.check("planted_structure_recovered", mismatches == 0,
          std::to_string(cases - mismatches) + "/" + std::to_string(cases));
  return r;
}

SuiteResult jordan_scan(const Graph& g, const std::string& name, const RunConfig&) {
  SuiteResult r{"scan", name, {}, {}};
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& c : spectrum(turn_sum(g)).clusters) {
    if (c.max_block > 1) hits.push_back({{"z", to_json(c.value)}, {"max_block", c.max_block}});
  }
  r.data["nontrivial_blocks"] = hits;
  return r;
}

}  // namespace nbspec
