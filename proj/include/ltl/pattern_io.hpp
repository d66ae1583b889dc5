#pragma once

#include <iosfwd>
#include <string>

#include "ltl/grid.hpp"

namespace ltl {

/// Plain-text pattern format (any dimension):
///   dims D
///   epsilon <decimal>
///   origin z1 ... zD
///   extent n1 ... nD
///   <rows of '0'/'1', one text line per run along the last axis,
///    earlier axes iterated lexicographically, blank line between
///    hyperplanes for D >= 3>
/// Lines starting with '#' are comments.  epsilon is printed with
/// enough digits to round-trip bit-exactly.
void write_pattern(std::ostream& os, const BinaryConfig& a);
void write_pattern_file(const std::string& path, const BinaryConfig& a);

/// Parses the format above.  Boundary modes are not encoded; the result is
/// growable on every axis (callers may re-tag axes as periodic).
BinaryConfig read_pattern(std::istream& is);
BinaryConfig read_pattern_file(const std::string& path);

/// Binary PGM (P5, maxval 255) rendering for 2-D configurations: live cells
/// black (0), dead cells white (255), each cell a scale x scale pixel block.
/// Row 0 of the image is the *highest* second coordinate, so the picture is
/// oriented like a conventional plot.
void write_pgm(std::ostream& os, const BinaryConfig& a, int scale = 1);
void write_pgm_file(const std::string& path, const BinaryConfig& a, int scale = 1);

}  // namespace ltl
