#pragma once

// Command-line front end. run_cli is the whole program minus main(), so the
// tests can drive it with captured streams.

#include <iosfwd>
#include <string>

#include "lattrans/lattice.hpp"
#include "lattrans/optimizer.hpp"

namespace lattrans {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int input_error = 2;
inline constexpr int budget_exceeded = 3;
inline constexpr int unresolved_tie = 4;
}  // namespace exit_code

/// Lattice grammar:
///   fcc | bcc | bcc:<lambda> | bct:<A>:<C>
///   <nine reals, comma separated, row-major; columns are lattice vectors>[:<centring>]
///   tri:<a>,<b>,<c>,<alpha>,<beta>,<gamma>[,<centring>]
/// Throws InvalidArgument on malformed text.
LatticeSpec parse_lattice(const std::string& text);

/// The report as a JSON document with 12 significant digits. Contains no
/// timing, so equal inputs give byte-identical text.
std::string structured_report(const OptimalityReport& rep, const Matrix3d& parent,
                              const Matrix3d& product);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lattrans
