#include "fracmaps/lattice_io.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracmaps/errors.hpp"
#include "fracmaps/format.hpp"

namespace fracmaps {

namespace {

void write_point_line(std::ostream& out, const char* label, const AmbientPoint& p) {
  out << "# " << label << ":";
  for (Eigen::Index k = 0; k < p.size(); ++k) out << ' ' << format_real(p[k]);
  out << '\n';
}

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw InvalidArgument("lattice csv: cannot parse number '" + item + "'");
    }
  }
  return out;
}

AmbientPoint to_point(const std::vector<double>& xs) {
  AmbientPoint p(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) p[static_cast<Eigen::Index>(k)] = xs[k];
  return p;
}

}  // namespace

void write_lattice_csv(std::ostream& out, const LatticeMap& u) {
  const auto& g = u.grid();
  out << "# grid: " << format_real(g.window().lo()) << ' ' << format_real(g.window().hi())
      << ' ' << format_real(g.h()) << ' ' << format_real(g.truncation_radius()) << '\n';
  write_point_line(out, "tail_below", u.tail_below());
  write_point_line(out, "tail_above", u.tail_above());
  out << "cell_index,cell_lo,cell_hi,is_interior";
  for (int k = 1; k <= u.dim(); ++k) out << ",v_" << k;
  out << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << i << ',' << format_real(g.cell_lo(i)) << ',' << format_real(g.cell_hi(i)) << ','
        << (g.is_interior(i) ? 1 : 0);
    for (int k = 0; k < u.dim(); ++k) {
      out << ',' << format_real(u.values()(static_cast<Eigen::Index>(i), k));
    }
    out << '\n';
  }
}

LatticeMap read_lattice_csv(std::istream& in) {
  std::optional<std::vector<double>> grid_line, below, above;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      auto take = [&](const std::string& key) -> std::optional<std::vector<double>> {
        const std::string tag = "# " + key + ":";
        if (line.rfind(tag, 0) != 0) return std::nullopt;
        return parse_numbers(line.substr(tag.size()), ' ');
      };
      if (auto v = take("grid")) grid_line = v;
      if (auto v = take("tail_below")) below = v;
      if (auto v = take("tail_above")) above = v;
      continue;
    }
    if (!header_seen) {
      if (line.rfind("cell_index", 0) != 0) throw InvalidArgument("lattice csv: missing header");
      header_seen = true;
      continue;
    }
    rows.push_back(parse_numbers(line, ','));
  }
  if (rows.empty()) throw InvalidArgument("lattice csv: no cells");
  const std::size_t width = rows.front().size();
  if (width < 5) throw InvalidArgument("lattice csv: need at least one value column");
  for (const auto& r : rows) {
    if (r.size() != width) throw InvalidArgument("lattice csv: ragged rows");
  }
  const auto d = static_cast<Eigen::Index>(width - 4);

  std::optional<LineGrid> grid;
  if (grid_line) {
    if (grid_line->size() != 4) throw InvalidArgument("lattice csv: malformed grid line");
    const auto& gl = *grid_line;
    grid.emplace(Interval(gl[0], gl[1]), gl[2], gl[3]);
  } else {
    std::optional<double> lo, hi;
    for (const auto& r : rows) {
      if (r[3] != 0.0) {
        if (!lo) lo = r[1];
        hi = r[2];
      }
    }
    if (!lo) throw InvalidArgument("lattice csv: no interior cells");
    grid.emplace(Interval(*lo, *hi), rows.front()[2] - rows.front()[1], -rows.front()[1]);
  }
  if (grid->size() != rows.size()) throw InvalidArgument("lattice csv: cell count does not match grid");

  LatticeMap::Values values(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<std::size_t>(rows[i][0]) != i || grid->is_interior(i) != (rows[i][3] != 0.0)) {
      throw InvalidArgument("lattice csv: row " + std::to_string(i) + " inconsistent with grid");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      values(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(4 + k)];
    }
  }
  AmbientPoint tb = below ? to_point(*below) : AmbientPoint(values.row(0).transpose());
  AmbientPoint ta = above ? to_point(*above) : AmbientPoint(values.row(values.rows() - 1).transpose());
  return LatticeMap(*grid, std::move(values), std::move(tb), std::move(ta));
}

}  // namespace fracmaps
