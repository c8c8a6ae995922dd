#ifndef KEYSIM_ALIST_HPP
#define KEYSIM_ALIST_HPP

#include <string>

#include "keysim/ldpc.hpp"

namespace keysim {

// alist interchange format: "n m" header, max column/row weights, per-column
// and per-row weight lists, then one line of 1-based indices per column and
// per row.  Zero padding (as written by some tools for irregular codes) is
// accepted on load; emitted files are unpadded with ascending indices.

SparseParityMatrix load_alist(const std::string& text);       // throws parse_error
SparseParityMatrix load_alist_file(const std::string& path);  // + io_error

std::string emit_alist(const SparseParityMatrix& H);
void emit_alist_file(const SparseParityMatrix& H, const std::string& path);

} // namespace keysim

#endif
