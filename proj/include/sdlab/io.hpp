#pragma once

#include <iosfwd>
#include <string>

#include "sdlab/grid.hpp"

namespace sdlab::io {

// Binary container: "SDLG" magic, int32 dim, int64 n, float64 L, int32 M,
// then n^d * M little-endian (re, im) float64 pairs.
void write_binary(std::ostream& os, const GridFunction& f);
GridFunction read_binary(std::istream& is);
void save(const std::string& path, const GridFunction& f);
GridFunction load(const std::string& path);

// One row per cell: i0[,i1],x0[,x1],re_0,im_0,...
void write_csv(std::ostream& os, const GridFunction& f);

}  // namespace sdlab::io
