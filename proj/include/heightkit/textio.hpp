#pragma once

#include <string>

#include "heightkit/lattice.hpp"
#include "heightkit/twist.hpp"

namespace heightkit {

// Input files are whitespace separated, '#' starts a comment, and the first line is `rank d`.
//
// Gram file: d*d exact rationals, row major.
//
// Twist file: blocks of d*d entries, each introduced by one of
//   default        rational component at every place not listed
//   place p        rational component at the prime p
//   place inf      rational component at infinity
//   real inf       real component at infinity (decimal entries, read as long double)

RatMatrix parse_rational_matrix_text(const std::string& text);
HermitianLattice parse_gram_text(const std::string& text);
AdelicGroupElement parse_twist_text(const std::string& text);

/// Reads a file, or expands the shorthand `I<d>` to the identity of rank d when no such file exists.
HermitianLattice load_gram(const std::string& path_or_name);
AdelicGroupElement load_twist(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace heightkit
