#include "fracmaps/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "fracmaps/cs_extension.hpp"
#include "fracmaps/format.hpp"
#include "fracmaps/lattice_io.hpp"
#include "fracmaps/line_grid.hpp"
#include "fracmaps/manifold.hpp"

namespace fracmaps::cli {

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ", field '" + field + "': " + message
                     : "field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Ctx {
  int line;
  const std::string& key;
  const std::filesystem::path& base;
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line, key, msg); }
};

double parse_plain(std::string_view t, const Ctx& c) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) c.fail("not a number: '" + std::string(t) + "'");
  return v;
}

// Accepts plain numbers and ratios such as 1/32.
double parse_real(std::string_view t, const Ctx& c) {
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return parse_plain(t, c);
  const double den = parse_plain(t.substr(slash + 1), c);
  if (den == 0.0) c.fail("zero denominator");
  return parse_plain(t.substr(0, slash), c) / den;
}

std::vector<double> parse_list(const std::string& v, const Ctx& c) {
  std::string s = v;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> out;
  for (std::string tok; is >> tok;) out.push_back(parse_real(tok, c));
  return out;
}

template <class Int>
Int parse_int(const std::string& v, const Ctx& c) {
  Int x{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) c.fail("not an integer: '" + v + "'");
  return x;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_real(v[i]);
  }
  return out;
}

const char* name_of(ExteriorKind k) {
  switch (k) {
    case ExteriorKind::constant: return "constant";
    case ExteriorKind::jump: return "jump";
    case ExteriorKind::csv: return "csv";
  }
  return "";
}

const char* name_of(MapSource k) {
  switch (k) {
    case MapSource::initial: return "initial";
    case MapSource::minimize: return "minimize";
    case MapSource::file: return "file";
  }
  return "";
}

const char* name_of(InitKind k) {
  switch (k) {
    case InitKind::exterior_jump: return "exterior_jump";
    case InitKind::geodesic: return "geodesic";
    case InitKind::random: return "random";
  }
  return "";
}

template <class E>
E parse_enum(const std::string& v, std::initializer_list<E> all, const Ctx& c) {
  std::string names;
  for (E e : all) {
    if (v == name_of(e)) return e;
    names += std::string(names.empty() ? "" : ", ") + name_of(e);
  }
  c.fail("expected one of " + names + ", got '" + v + "'");
}

std::filesystem::path resolve_path(const std::string& v, const Ctx& c) {
  if (v.empty()) return {};
  std::filesystem::path p(v);
  if (p.is_relative() && !c.base.empty()) p = c.base / p;
  return p.lexically_normal();
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&, const Ctx&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real_field(const char* key, double ExperimentConfig::*m) {
  return {key, [m](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.*m = parse_real(v, x); },
          [m](const ExperimentConfig& c) { return format_real(c.*m); }};
}

Field list_field(const char* key, std::vector<double> ExperimentConfig::*m) {
  return {key, [m](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.*m = parse_list(v, x); },
          [m](const ExperimentConfig& c) { return join(c.*m); }};
}

Field path_field(const char* key, std::filesystem::path ExperimentConfig::*m) {
  return {key, [m](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.*m = resolve_path(v, x); },
          [m](const ExperimentConfig& c) { return (c.*m).generic_string(); }};
}

Field solver_real(const char* key, double SolverOptions::*m) {
  return {key,
          [m](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.solver.*m = parse_real(v, x); },
          [m](const ExperimentConfig& c) { return format_real(c.solver.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      real_field("s", &ExperimentConfig::s),
      {"window",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         const auto w = parse_list(v, x);
         if (w.size() != 2) x.fail("expected two numbers");
         c.window_lo = w[0];
         c.window_hi = w[1];
       },
       [](const ExperimentConfig& c) { return join({c.window_lo, c.window_hi}); }},
      real_field("h", &ExperimentConfig::h),
      real_field("R", &ExperimentConfig::R),
      {"target",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         if (v != "sphere" && v != "point_pair") x.fail("expected sphere or point_pair, got '" + v + "'");
         c.target = v;
       },
       [](const ExperimentConfig& c) { return c.target; }},
      {"target_dim",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.target_dim = parse_int<int>(v, x); },
       [](const ExperimentConfig& c) { return std::to_string(c.target_dim); }},
      {"exterior",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         c.exterior = parse_enum(v, {ExteriorKind::constant, ExteriorKind::jump, ExteriorKind::csv}, x);
       },
       [](const ExperimentConfig& c) { return std::string(name_of(c.exterior)); }},
      list_field("exterior.value", &ExperimentConfig::exterior_value),
      list_field("exterior.above", &ExperimentConfig::exterior_above),
      list_field("exterior.below", &ExperimentConfig::exterior_below),
      path_field("exterior.file", &ExperimentConfig::exterior_file),
      {"init",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         c.init = parse_enum(v, {InitKind::exterior_jump, InitKind::geodesic, InitKind::random}, x);
       },
       [](const ExperimentConfig& c) { return std::string(name_of(c.init)); }},
      {"map_source",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         c.map_source = parse_enum(v, {MapSource::initial, MapSource::minimize, MapSource::file}, x);
       },
       [](const ExperimentConfig& c) { return std::string(name_of(c.map_source)); }},
      path_field("map_file", &ExperimentConfig::map_file),
      {"solver.max_iters",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.solver.max_iters = parse_int<int>(v, x); },
       [](const ExperimentConfig& c) { return std::to_string(c.solver.max_iters); }},
      solver_real("solver.grad_tol", &SolverOptions::grad_tol),
      solver_real("solver.step0", &SolverOptions::step0),
      solver_real("solver.armijo_c", &SolverOptions::armijo_c),
      solver_real("solver.backtrack", &SolverOptions::backtrack),
      solver_real("solver.perturbation", &SolverOptions::perturbation),
      {"extension.grid",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) {
         const auto g = parse_list(v, x);
         if (g.size() != 5) x.fail("expected x_lo x_hi y_max dx dy");
         c.ext_x_lo = g[0];
         c.ext_x_hi = g[1];
         c.ext_y_max = g[2];
         c.ext_dx = g[3];
         c.ext_dy = g[4];
       },
       [](const ExperimentConfig& c) {
         return join({c.ext_x_lo, c.ext_x_hi, c.ext_y_max, c.ext_dx, c.ext_dy});
       }},
      list_field("extension.residual_region", &ExperimentConfig::residual_region),
      list_field("probe_points", &ExperimentConfig::probe_points),
      list_field("probe_radii", &ExperimentConfig::probe_radii),
      real_field("density_threshold", &ExperimentConfig::density_threshold),
      list_field("blowup.scales", &ExperimentConfig::blowup_scales),
      real_field("blowup.reference_h", &ExperimentConfig::blowup_reference_h),
      real_field("blowup.tangent_tol", &ExperimentConfig::blowup_tangent_tol),
      list_field("holder.points", &ExperimentConfig::holder_points),
      list_field("holder.radii", &ExperimentConfig::holder_radii),
      list_field("stability.s", &ExperimentConfig::stability_s),
      list_field("stability.theta", &ExperimentConfig::stability_theta),
      // Relative to the working directory, unlike input files.
      {"output_dir",
       [](ExperimentConfig& c, const std::string& v, const Ctx&) { c.output_dir = v.empty() ? "." : v; },
       [](const ExperimentConfig& c) { return c.output_dir.generic_string(); }},
      {"seed",
       [](ExperimentConfig& c, const std::string& v, const Ctx& x) { c.seed = parse_int<std::uint64_t>(v, x); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

int line_of(const std::vector<std::pair<std::string, int>>& lines, const std::string& key) {
  for (const auto& [k, l] : lines)
    if (k == key) return l;
  return 0;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, int>> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(std::string_view(raw).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, text, "expected key = value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) throw ConfigError(line, key, "unknown key");
    if (const int prev = line_of(seen, key)) {
      throw ConfigError(line, key, "repeated key (first set on line " + std::to_string(prev) + ")");
    }
    seen.emplace_back(key, line);
    it->set(cfg, value, Ctx{line, key, base_dir});
  }
  validate(cfg, seen);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "--config", "cannot open " + path.string());
  return parse_config(in, path.parent_path());
}

void validate(ExperimentConfig& cfg, const std::vector<std::pair<std::string, int>>& lines) {
  const auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(line_of(lines, key), key, msg);
  };
  const auto in_order_range = [](double s) { return s > 0.0 && s < 0.5; };

  if (!in_order_range(cfg.s)) fail("s", "must lie in (0, 1/2), got " + format_real(cfg.s));
  if (!(cfg.window_lo < cfg.window_hi)) fail("window", "needs lo < hi");
  if (!(cfg.h > 0.0)) fail("h", "must be positive");
  if (!(cfg.R > std::max(std::abs(cfg.window_lo), std::abs(cfg.window_hi))))
    fail("R", "must exceed the window");
  std::optional<LineGrid> grid;
  try {
    grid.emplace(Interval(cfg.window_lo, cfg.window_hi), cfg.h, cfg.R);
  } catch (const Error& e) {
    fail("h", std::string("must divide the window and both exterior strips: ") + e.what());
  }

  int ambient = 1;
  if (cfg.target == "sphere") {
    if (cfg.target_dim < 1) fail("target_dim", "sphere dimension must be at least 1");
    ambient = cfg.target_dim + 1;
  }
  const std::shared_ptr<const TargetManifold> m =
      cfg.target == "sphere" ? make_sphere(ambient) : make_point_pair();

  const auto point = [&](std::vector<double>& v, const std::string& key, double sign) {
    if (v.empty()) {
      v.assign(static_cast<std::size_t>(ambient), 0.0);
      v[0] = sign;
    }
    if (static_cast<int>(v.size()) != ambient)
      fail(key, "expected " + std::to_string(ambient) + " components");
    const AmbientPoint p = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    if (m->dist(p) > 1e-9) fail(key, "value is not on the target");
  };
  point(cfg.exterior_value, "exterior.value", 1.0);
  point(cfg.exterior_above, "exterior.above", 1.0);
  point(cfg.exterior_below, "exterior.below", -1.0);

  const auto require_file = [&](const std::filesystem::path& p, const std::string& key) {
    if (p.empty()) fail(key, "a file is required");
    if (!std::filesystem::is_regular_file(p)) fail(key, "no such file: " + p.string());
  };
  const auto check_lattice = [&](const std::filesystem::path& p, const std::string& key) {
    require_file(p, key);
    std::ifstream in(p);
    try {
      const LatticeMap u = read_lattice_csv(in);
      if (!(u.grid() == *grid)) fail(key, "grid of the file differs from the configured grid");
      if (u.dim() != ambient) fail(key, "dimension of the file differs from the target");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(key, std::string("unreadable lattice file: ") + e.what());
    }
  };
  if (cfg.exterior == ExteriorKind::csv) check_lattice(cfg.exterior_file, "exterior.file");
  if (cfg.map_source == MapSource::file) check_lattice(cfg.map_file, "map_file");

  try {
    cfg.solver.validate();
  } catch (const Error& e) {
    fail("solver", e.what());
  }

  try {
    HalfRectGrid(cfg.ext_x_lo, cfg.ext_x_hi, cfg.ext_y_max, cfg.ext_dx, cfg.ext_dy);
  } catch (const Error& e) {
    fail("extension.grid", e.what());
  }
  if (cfg.residual_region.size() != 4 || !(cfg.residual_region[0] < cfg.residual_region[1]) ||
      !(cfg.residual_region[2] < cfg.residual_region[3]))
    fail("extension.residual_region", "expected x_lo x_hi y_lo y_hi with lo < hi");

  if (cfg.probe_radii.empty()) fail("probe_radii", "at least one radius is required");
  for (double r : cfg.probe_radii)
    if (!(r > 0.0)) fail("probe_radii", "radii must be positive");

  if (cfg.blowup_scales.size() < 3) fail("blowup.scales", "at least three scales are required");
  for (std::size_t i = 0; i < cfg.blowup_scales.size(); ++i) {
    if (!(cfg.blowup_scales[i] > 0.0)) fail("blowup.scales", "scales must be positive");
    if (i && !(cfg.blowup_scales[i] < cfg.blowup_scales[i - 1]))
      fail("blowup.scales", "scales must be strictly decreasing");
  }
  try {
    LineGrid(Interval(-1.0, 1.0), cfg.blowup_reference_h, 2.0);
  } catch (const Error& e) {
    fail("blowup.reference_h", e.what());
  }
  if (!(cfg.blowup_tangent_tol > 0.0)) fail("blowup.tangent_tol", "must be positive");
  if (cfg.holder_radii.empty()) cfg.holder_radii = {2 * cfg.h, 4 * cfg.h, 8 * cfg.h, 16 * cfg.h};
  for (double r : cfg.holder_radii)
    if (!(r > 0.0)) fail("holder.radii", "radii must be positive");

  if (cfg.stability_s.empty()) fail("stability.s", "at least one order is required");
  for (double s : cfg.stability_s)
    if (!in_order_range(s)) fail("stability.s", "every order must lie in (0, 1/2)");
  for (double t : cfg.stability_theta)
    if (!(t >= 0.0 && t < std::numbers::pi / 2)) fail("stability.theta", "angles must lie in [0, pi/2)");
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : fields()) {
    // Where artifacts go is not part of what they describe.
    if (std::string_view(f.key) == "output_dir") continue;
    out.emplace_back(f.key, f.get(cfg));
  }
  return out;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : resolved_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace fracmaps::cli
