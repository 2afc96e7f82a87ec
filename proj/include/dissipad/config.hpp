#pragma once

#include <string>

#include "dissipad/cavity.hpp"
#include "dissipad/lattice.hpp"

namespace dissipad {

// Lattice configuration file: UTF-8 text with [lattice], [hopping] and
// [dissipator] sections. [hopping] holds an edge list "i j re im" where the
// site ids are chain labels (-N..-1, 1..N) for type=chain and plain indices
// 0..2N-1 otherwise. The dissipator block takes site0/site1, the pairing
// weight as v2 (or u2), phi and gamma.
LatticeSpec parse_lattice_config(const std::string& path);

/// Key = value preset for the driven-cavity model (frequencies in the same
/// rate units as kappa; sidebands are derived, not read).
DrivenCavityParams parse_cavity_preset(const std::string& path);

/// Raw file contents (for manifest snapshots).
std::string slurp_file(const std::string& path);

}  // namespace dissipad
