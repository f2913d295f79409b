#include "fracmaps/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracmaps/analysis.hpp"
#include "fracmaps/cli/artifacts.hpp"
#include "fracmaps/cs_extension.hpp"
#include "fracmaps/discrete_energy.hpp"
#include "fracmaps/format.hpp"
#include "fracmaps/lattice_io.hpp"
#include "fracmaps/riesz_kernel.hpp"
#include "fracmaps/solver.hpp"
#include "fracmaps/variation.hpp"

namespace fracmaps::cli {

namespace {

AmbientPoint as_point(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json as_json(const AmbientPoint& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

const char* to_string(TangentKind k) {
  switch (k) {
    case TangentKind::constant: return "constant";
    case TangentKind::jump: return "jump";
    case TangentKind::unresolved: return "unresolved";
  }
  return "";
}

Provenance provenance(const std::string& command, const ExperimentConfig& cfg) {
  return {command, resolved_entries(cfg)};
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o = cfg.solver;
  o.seed = cfg.seed;
  return o;
}

HalfRectGrid extension_grid(const ExperimentConfig& cfg, double refine = 1.0) {
  return {cfg.ext_x_lo, cfg.ext_x_hi, cfg.ext_y_max, cfg.ext_dx / refine, cfg.ext_dy / refine};
}

double window_mid(const ExperimentConfig& cfg) { return 0.5 * (cfg.window_lo + cfg.window_hi); }

LatticeMap read_lattice(const std::filesystem::path& p) {
  std::ifstream in(p);
  return read_lattice_csv(in);
}

LatticeMap obtain_map(const ExperimentConfig& cfg) {
  switch (cfg.map_source) {
    case MapSource::file: return read_lattice(cfg.map_file);
    case MapSource::minimize: {
      const FractionalOrder order(cfg.s);
      const LatticeMap u0 = initial_lattice(cfg);
      return minimize(u0, assemble(u0.grid(), order), *make_target(cfg), order, solver_options(cfg)).map;
    }
    case MapSource::initial: break;
  }
  return initial_lattice(cfg);
}

// Wraps library errors caused by configured radii or grids so they surface
// as configuration errors.
template <class F>
auto as_config_error(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const RegionNotCovered& e) {
    throw ConfigError(0, field, e.what());
  } catch (const BadRadii& e) {
    throw ConfigError(0, field, e.what());
  } catch (const CoverageExceeded& e) {
    throw ConfigError(0, field, e.what());
  } catch (const InsufficientRadii& e) {
    throw ConfigError(0, field, e.what());
  }
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

}  // namespace

std::shared_ptr<const TargetManifold> make_target(const ExperimentConfig& cfg) {
  return cfg.target == "sphere" ? make_sphere(cfg.target_dim + 1) : make_point_pair();
}

LineGrid make_grid(const ExperimentConfig& cfg) {
  return {Interval(cfg.window_lo, cfg.window_hi), cfg.h, cfg.R};
}

LatticeMap exterior_map(const ExperimentConfig& cfg) {
  const LineGrid g = make_grid(cfg);
  switch (cfg.exterior) {
    case ExteriorKind::constant: return constant_map(g, as_point(cfg.exterior_value));
    case ExteriorKind::jump:
      return jump_map(g, as_point(cfg.exterior_above), as_point(cfg.exterior_below), cfg.window_lo);
    case ExteriorKind::csv: break;
  }
  return read_lattice(cfg.exterior_file);
}

LatticeMap initial_lattice(const ExperimentConfig& cfg) {
  return initial_map(exterior_map(cfg), *make_target(cfg), cfg.init, cfg.seed);
}

RunResult run_minimize(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const FractionalOrder order(cfg.s);
  const auto m = make_target(cfg);
  const LatticeMap u0 = initial_lattice(cfg);
  const KernelMatrix K = assemble(u0.grid(), order);
  const SolveReport rep = minimize(u0, K, *m, order, solver_options(cfg));

  bool monotone = true;
  for (std::size_t k = 1; k < rep.energies.size(); ++k) monotone = monotone && rep.energies[k] <= rep.energies[k - 1];

  Json payload = Json::object();
  payload["target"] = m->name();
  payload["interior_cells"] = u0.grid().interior_count();
  payload["termination"] = to_string(rep.reason);
  payload["iterations"] = rep.iterations;
  payload["grad_norm"] = rep.grad_norm;
  payload["el_residual"] = m->intrinsic_dim() > 0 ? el_residual(rep.map, K, *m, order) : 0.0;
  payload["initial_energy"] = rep.energies.front();
  payload["final_energy"] = rep.energies.back();
  payload["energy_monotone"] = monotone;
  payload["max_adjacent_jump"] = max_adjacent_jump(rep.map);
  if (m->kind() == TargetKind::point_pair) {
    const FlipReport f = flip_search(rep.map, K, order);
    payload["flip_search"] = {{"best_cell", f.best_cell},
                              {"best_delta", f.best_delta},
                              {"flip_stable", f.best_delta >= -1e-12}};
  }
  payload["energies"] = rep.energies;

  const Provenance prov = provenance("minimize", cfg);
  std::ostringstream map_csv;
  write_lattice_csv(map_csv, rep.map);
  RunResult out;
  out.artifacts = {out_dir / "map.csv", out_dir / "solve_report.json"};
  write_csv_artifact(out.artifacts[0], prov, map_csv.str());
  write_json_artifact(out.artifacts[1], prov, payload);
  out.exit_code = rep.reason == Termination::converged ? exit_ok : exit_no_convergence;
  out.summary = "minimize: " + to_string(rep.reason) + " after " + std::to_string(rep.iterations) +
                " iterations, energy " + format_real(rep.energies.back());
  return out;
}

RunResult run_extension(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const FractionalOrder order(cfg.s);
  const LatticeMap u = obtain_map(cfg);
  const ExtensionField v = poisson_extend(u, extension_grid(cfg), order);
  const ExtensionField fine = poisson_extend(u, extension_grid(cfg, 2.0), order);
  const auto& rr = cfg.residual_region;
  const NodeRegion region{rr[0], rr[1], rr[2], rr[3]};
  const double coarse_res = weighted_residual(v, order, region);
  const double fine_res = weighted_residual(fine, order, region);

  const std::vector<double> centers = cfg.probe_points.empty() ? std::vector<double>{window_mid(cfg)} : cfg.probe_points;
  const Provenance prov = provenance("extend", cfg);
  RunResult out;

  Json profiles = Json::array();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const DensityProfile p =
        as_config_error("probe_radii", [&] { return density_profile(v, centers[k], cfg.probe_radii, order); });
    const auto [lo, hi] = std::minmax_element(p.theta.begin(), p.theta.end());
    double mean = 0.0;
    for (double t : p.theta) mean += t / static_cast<double>(p.theta.size());
    Json deficits = Json::array();
    for (std::size_t i = 1; i < p.radii.size(); ++i) {
      const MonotonicityDeficit d = monotonicity_deficit(v, centers[k], p.radii[i - 1], p.radii[i], order);
      deficits.push_back({{"rho", p.radii[i - 1]}, {"r", p.radii[i]}, {"lhs", d.lhs}, {"rhs", d.rhs}});
    }
    profiles.push_back({{"center", centers[k]},
                        {"radii", p.radii},
                        {"theta", p.theta},
                        {"relative_spread", mean != 0.0 ? (*hi - *lo) / mean : 0.0},
                        {"monotonicity", deficits}});
    std::ostringstream csv;
    write_profile_csv(csv, p);
    const auto path = out_dir / ("profile_" + std::to_string(k) + ".csv");
    write_csv_artifact(path, prov, csv.str());
    out.artifacts.push_back(path);
  }

  Json payload = Json::object();
  payload["mass_defect"] = v.mass_defect;
  payload["residual_all_nodes"] = weighted_residual(v, order);
  payload["residual_region"] = rr;
  payload["refinement"] = Json::array({
      {{"dx", v.grid.dx()}, {"dy", v.grid.dy()}, {"residual", coarse_res}},
      {{"dx", fine.grid.dx()}, {"dy", fine.grid.dy()}, {"residual", fine_res}},
  });
  payload["observed_rate"] = coarse_res > 0.0 && fine_res > 0.0 ? std::log2(coarse_res / fine_res) : 0.0;
  payload["profiles"] = profiles;

  std::ostringstream field_csv;
  write_field_csv(field_csv, v);
  out.artifacts.insert(out.artifacts.begin(), {out_dir / "field.csv", out_dir / "residual.json"});
  write_csv_artifact(out.artifacts[0], prov, field_csv.str());
  write_json_artifact(out.artifacts[1], prov, payload);
  out.summary = "extend: " + std::to_string(v.grid.node_count()) + " nodes, region residual " +
                format_real(coarse_res) + " -> " + format_real(fine_res);
  return out;
}

RunResult run_stability(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::string body = "s,alpha,beta,E0,dE,d2E_antipodal,identity_residual,identity_check\n";
  bool all_pass = true;
  for (double s : cfg.stability_s) {
    const FractionalOrder order(s);
    const VariationCoefficients k = variation_coefficients(order);
    const double residual = k.I2 - k.I1 - k.I3;
    const bool pass = std::abs(residual) <= 1e-12;
    all_pass = all_pass && pass;
    for (double theta : cfg.stability_theta) {
      const StabilityRow row = stability_row(JumpConfig::from_angle(theta), order);
      body += format_real(row.s) + "," + format_real(row.alpha) + "," + format_real(row.beta) + "," +
              format_real(row.energy) + "," + format_real(row.first_variation) + "," +
              format_real(row.second_variation_antipodal) + "," + format_real(residual) + "," +
              (pass ? "pass" : "fail") + "\n";
    }
  }
  RunResult out;
  out.artifacts = {out_dir / "stability.csv"};
  write_csv_artifact(out.artifacts[0], provenance("stability", cfg), body);
  out.exit_code = all_pass ? exit_ok : exit_check;
  out.summary = std::string("stability: identity check ") + (all_pass ? "passed" : "FAILED");
  return out;
}

RunResult run_blowup(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const FractionalOrder order(cfg.s);
  const auto m = make_target(cfg);
  const LatticeMap u = obtain_map(cfg);
  const ExtensionField v = poisson_extend(u, extension_grid(cfg), order);
  const double threshold = cfg.density_threshold > 0.0 ? cfg.density_threshold : jump_density(1.0, order);
  std::optional<std::vector<double>> probes;
  if (!cfg.probe_points.empty()) probes = cfg.probe_points;
  const SingularSetReport rep =
      as_config_error("probe_radii", [&] { return singular_set(u, v, threshold, cfg.probe_radii, order, probes); });

  const LineGrid ref(Interval(-1.0, 1.0), cfg.blowup_reference_h, 2.0);
  const auto classify = [&](double x0) {
    return as_config_error("blowup.scales", [&] {
      return tangent_classify(blowup_sequence(u, x0, cfg.blowup_scales, ref), *m, cfg.blowup_tangent_tol);
    });
  };

  Json tangents = Json::array();
  for (double x0 : rep.flagged) {
    const TangentClass t = classify(x0);
    tangents.push_back({{"point", x0},
                        {"kind", to_string(t.kind)},
                        {"a", as_json(t.a)},
                        {"b", as_json(t.b)},
                        {"residual", t.residual}});
  }
  Json payload = Json::object();
  payload["threshold"] = rep.threshold;
  payload["points"] = rep.points;
  payload["theta"] = rep.theta;
  payload["flagged"] = rep.flagged;
  payload["tangents"] = tangents;

  std::string table = "x0,exponent,fit_residual,constant,tangent_kind,tangent_residual\n";
  const std::vector<double> points = cfg.holder_points.empty() ? std::vector<double>{window_mid(cfg)} : cfg.holder_points;
  for (double x0 : points) {
    const HolderFit f = as_config_error("holder.radii", [&] { return holder_exponent(u, x0, cfg.holder_radii); });
    const TangentClass t = classify(x0);
    table += format_real(x0) + "," + format_real(f.exponent) + "," + format_real(f.fit_residual) + "," +
             (f.constant ? "true" : "false") + "," + to_string(t.kind) + "," + format_real(t.residual) + "\n";
  }

  const Provenance prov = provenance("blowup", cfg);
  RunResult out;
  out.artifacts = {out_dir / "singular_set.json", out_dir / "exponents.csv"};
  write_json_artifact(out.artifacts[0], prov, payload);
  write_csv_artifact(out.artifacts[1], prov, table);
  out.summary = "blowup: " + std::to_string(rep.flagged.size()) + " flagged of " +
                std::to_string(rep.points.size()) + " probe points";
  return out;
}

RunResult run_selftest(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::vector<Check> checks;
  const auto add = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, std::abs(value) <= tol});
  };
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

  // Closed-form masses against the independent quadrature, seeded pairs.
  {
    const FractionalOrder o(cfg.s);
    std::uint64_t state = cfg.seed * 0x9E3779B97F4A7C15ULL + 1;
    const auto next = [&] {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double a = -2.0 + 2.0 * next();
      const double b = a + 0.05 + next();
      const double c = b + (k % 2 ? 0.0 : next());
      const double d = c + 0.05 + next();
      const Interval I(a, b), J(c, d);
      worst = std::max(worst, rel(kernel_mass(I, J, o).value, quadrature_oracle(I, J, o, 1e-12)));
    }
    add("kernel_mass_vs_quadrature", worst, 1e-10);
  }
  {
    const FractionalOrder q(0.25);
    const VariationCoefficients k = variation_coefficients(q);
    const double r2 = std::sqrt(2.0);
    add("canonical_I1_quarter", k.I1 - 4.0 * (2.0 - r2), 1e-12);
    add("canonical_I2_quarter", k.I2 - 4.0, 1e-12);
    add("canonical_I3_quarter", k.I3 - 4.0 * (r2 - 1.0), 1e-12);
    const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
    AmbientPoint e(2);
    e << 1.0, 0.0;
    const double E = energy(jump_map(g, e, -e), assemble(g, q), q);
    add("antipodal_jump_energy", E - 16.0 * r2 * gamma_s(q), 1e-9);
  }
  {
    double worst_identity = 0.0, worst_second = 0.0;
    for (double s : cfg.stability_s) {
      const FractionalOrder o(s);
      const VariationCoefficients k = variation_coefficients(o);
      worst_identity = std::max(worst_identity, std::abs(k.I2 - k.I1 - k.I3));
      worst_second = std::max(worst_second, std::abs(second_variation_antipodal(o) + 4.0 * k.gamma * k.I1));
    }
    add("mass_identity", worst_identity, 1e-12);
    add("second_variation_reduction", worst_second, 1e-12);
  }
  {
    const FractionalOrder o(cfg.s);
    const LineGrid g(Interval(-1.0, 1.0), 1.0 / 8, 2.0);
    const KernelMatrix K = assemble(g, o);
    AmbientPoint e(2);
    e << 0.6, 0.8;
    LatticeMap u = jump_map(g, e, -e);
    for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
      AmbientPoint p(2);
      p << std::cos(0.37 * static_cast<double>(i)), std::sin(0.91 * static_cast<double>(i));
      u.set_interior(i, p);
    }
    const auto grad = energy_gradient(u, K, o);
    double worst = 0.0;
    const double step = 1e-5;
    for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
      for (int c = 0; c < 2; ++c) {
        LatticeMap up = u, dn = u;
        AmbientPoint p = u.value(i);
        p[c] += step;
        up.set_interior(i, p);
        p[c] -= 2.0 * step;
        dn.set_interior(i, p);
        const double fd = (energy(up, K, o) - energy(dn, K, o)) / (2.0 * step);
        const double an = grad(static_cast<Eigen::Index>(i - g.first_interior()), c);
        worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
      }
    }
    add("gradient_vs_finite_differences", worst, 1e-6);

    AmbientPoint c(2);
    c << 0.0, 1.0;
    const ExtensionField v = poisson_extend(constant_map(g, c), HalfRectGrid(-1.0, 1.0, 0.5, 1.0 / 16, 1.0 / 16), o);
    double dev = 0.0;
    for (Eigen::Index r = 0; r < v.values.rows(); ++r) dev = std::max(dev, (v.values.row(r) - c.transpose()).norm());
    add("extension_of_constant", dev, 1e-10);
  }
  {
    const FractionalOrder o(0.1);
    const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
    const FlipReport f = flip_search(jump_map(g, AmbientPoint::Constant(1, 1.0), AmbientPoint::Constant(1, -1.0)),
                                     assemble(g, o), o);
    add("point_pair_flip_stability", std::min(f.best_delta, 0.0), 1e-12);
  }

  bool all = true;
  Json list = Json::array();
  for (const Check& c : checks) {
    all = all && c.pass;
    list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  Json payload = Json::object();
  payload["checks"] = list;
  payload["all_pass"] = all;
  RunResult out;
  out.artifacts = {out_dir / "selftest.json"};
  write_json_artifact(out.artifacts[0], provenance("selftest", cfg), payload);
  out.exit_code = all ? exit_ok : exit_check;
  out.summary = "selftest: " + std::to_string(checks.size()) + " checks, " + (all ? "all passed" : "FAILURES");
  return out;
}

}  // namespace fracmaps::cli
