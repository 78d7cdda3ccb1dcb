#include <numeric>
#include <set>

#include "doctest.h"
#include "dscert/orbits.hpp"

using namespace dscert;

TEST_CASE("box symmetry group sizes") {
  CHECK(box_symmetries(build_box(2, {3, 3})).size() == 8);  // dihedral
  CHECK(box_symmetries(build_box(2, {3, 4})).size() == 4);  // axis reversals only
  CHECK(box_symmetries(build_box(1, {5})).size() == 2);
}

TEST_CASE("boundary permutations are bijections preserving the boundary") {
  const BoxGeometry g = build_box(2, {2, 3});
  for (const BoxSymmetry& s : box_symmetries(g)) {
    const std::vector<int> p = boundary_permutation(g, s);
    std::set<int> image(p.begin(), p.end());
    CHECK(static_cast<int>(image.size()) == g.boundary_size());
  }
}

TEST_CASE("boundary site classes cover all sites") {
  const BoxGeometry g = build_box(2, {3, 4});
  const auto classes = boundary_site_classes(g);
  CHECK(classes.size() == 4);  // two face lengths, two site types per face
  int total = 0;
  for (const auto& c : classes) {
    total += static_cast<int>(c.members.size());
    CHECK(c.representative == c.members.front());
    for (std::size_t k = 0; k < c.members.size(); ++k)
      CHECK(c.member_maps[k][c.representative] == c.members[k]);
  }
  CHECK(total == g.boundary_size());

  // All four neighbors of a single site are equivalent.
  CHECK(boundary_site_classes(build_box(2, {1, 1})).size() == 1);
  // 3x3: face centers and face edges.
  CHECK(boundary_site_classes(build_box(2, {3, 3})).size() == 2);
}

TEST_CASE("single-site orbits collapse eight raw patterns") {
  const BoxGeometry g = build_box(2, {1, 1});
  // Boundary sites of the 1x1 box in lexicographic order:
  // (-1,0), (0,-1), (0,1), (1,0); take y = east = (1,0) = index 3.
  const OrbitSet orbits = boundary_orbits(g, 3);
  CHECK(orbits.raw_count == 8);
  CHECK(orbits.orbits.size() <= 4);

  std::uint64_t mult = 0;
  for (const BoundaryOrbit& o : orbits.orbits) {
    mult += o.multiplicity;
    CHECK((o.representative & (1ull << 3)) == 0);
  }
  CHECK(mult == orbits.raw_count);
}

TEST_CASE("orbit multiplicities always partition the raw patterns") {
  for (auto [w, h] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 4}}) {
    const BoxGeometry g = build_box(2, {w, h});
    for (int y = 0; y < g.boundary_size(); ++y) {
      const OrbitSet orbits = boundary_orbits(g, y);
      std::uint64_t mult = 0;
      std::set<std::uint64_t> reps;
      for (const BoundaryOrbit& o : orbits.orbits) {
        mult += o.multiplicity;
        CHECK(reps.insert(o.representative).second);
      }
      CHECK(mult == orbits.raw_count);
      // The global flip alone already halves the enumeration.
      CHECK(orbits.orbits.size() * 2 <= orbits.raw_count + orbits.orbits.size());
    }
  }
}

TEST_CASE("disabling symmetry enumerates every pattern once") {
  const BoxGeometry g = build_box(2, {2, 2});
  const OrbitSet all = boundary_orbits(g, 5, /*use_symmetry=*/false);
  CHECK(all.orbits.size() == all.raw_count);
  std::set<std::uint64_t> reps;
  for (const BoundaryOrbit& o : all.orbits) {
    CHECK(o.multiplicity == 1);
    CHECK((o.representative & (1ull << 5)) == 0);
    reps.insert(o.representative);
  }
  CHECK(reps.size() == all.raw_count);
}
