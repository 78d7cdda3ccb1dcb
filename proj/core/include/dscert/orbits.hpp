#pragma once

#include <cstdint>
#include <vector>

#include "dscert/box_geometry.hpp"

namespace dscert {

/// A symmetry of the box: coordinate i of the image is coordinate
/// axis_perm[i] of the argument, reversed when axis_flip[i] is set.
/// Only permutations between axes of equal extent are valid. The action
/// extends to boundary sites (coordinate -1 maps to extent under reversal).
struct BoxSymmetry {
  std::vector<int> axis_perm;
  std::vector<bool> axis_flip;
};

/// All symmetries of the box (identity included).
std::vector<BoxSymmetry> box_symmetries(const BoxGeometry& g);

/// Permutation of boundary indices induced by a symmetry.
std::vector<int> boundary_permutation(const BoxGeometry& g, const BoxSymmetry& sym);

/// Equivalence classes of boundary sites under the full symmetry group.
/// k_{V,y} is constant on each class, so the certifier evaluates one
/// representative per class.
struct BoundarySiteClass {
  int representative;            // smallest boundary index in the class
  std::vector<int> members;      // ascending
  std::vector<std::vector<int>> member_maps;  // boundary permutation taking representative to each member
};

std::vector<BoundarySiteClass> boundary_site_classes(const BoxGeometry& g);

/// One orbit of boundary configurations on dV \ {y}.
struct BoundaryOrbit {
  std::uint64_t representative;  // full-width boundary bits, bit y clear
  std::uint64_t multiplicity;
};

struct OrbitSet {
  std::vector<BoundaryOrbit> orbits;
  std::uint64_t raw_count = 0;  // 2^(|dV|-1)
};

/// Partitions the 2^(|dV|-1) configurations of dV \ {y} under
///   (a) the global spin flip (the flip pair at y maps to itself reversed),
///   (b) the box symmetries fixing y.
/// The K-distance of the flip pair is constant on each orbit, so maximizing
/// over representatives equals maximizing over all configurations.
/// With use_symmetry = false every configuration is its own orbit.
OrbitSet boundary_orbits(const BoxGeometry& g, int flip_site, bool use_symmetry = true);

}  // namespace dscert
