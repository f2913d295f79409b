#pragma once

// CSV form of a LatticeMap:
//   # grid: <x_l> <x_r> <h> <R>
//   # tail_below: <v_1> ... <v_d>
//   # tail_above: <v_1> ... <v_d>
//   cell_index,cell_lo,cell_hi,is_interior,v_1,...,v_d
// Numbers carry 17 significant digits. Other '#' lines are ignored on read.

#include <iosfwd>

#include "fracmaps/line_grid.hpp"

namespace fracmaps {

void write_lattice_csv(std::ostream& out, const LatticeMap& u);

/// Reads the format above. The grid comes from the "# grid:" line when
/// present, otherwise it is inferred from the cell rows; missing tail lines
/// default to the first and last cell values.
LatticeMap read_lattice_csv(std::istream& in);

}  // namespace fracmaps
