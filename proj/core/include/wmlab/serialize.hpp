#pragma once

#include <iosfwd>
#include <string>

#include "wmlab/phase_space.hpp"

namespace wmlab {

// Flat binary layout, all little-endian:
//   4 bytes  magic, "WMSY" for a Symbol or "WMOP" for an OperatorMatrix
//   int32    N
//   float64  L
//   float64  hbar
//   N*N (re, im) float64 pairs, row-major: entry (row, col) at row*N + col.
// Symbol rows are q indices and columns p indices.
void write_binary(std::ostream& out, const Symbol& s);
void write_binary(std::ostream& out, const OperatorMatrix& m);
Symbol read_symbol_binary(std::istream& in);
OperatorMatrix read_operator_binary(std::istream& in);

void save_binary(const std::string& path, const Symbol& s);
Symbol load_symbol(const std::string& path);

// CSV with header "q,p,re,im", one row per grid point, rows in (q, p)
// row-major order. Values use 17 significant digits.
void write_csv(std::ostream& out, const Symbol& s);

}  // namespace wmlab
