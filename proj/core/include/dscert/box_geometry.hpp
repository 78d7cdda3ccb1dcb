#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dscert {

// Lattice site given by integer coordinates; size equals the box dimension.
// Interior sites have coordinates in [0, extent_i); boundary sites have
// exactly one coordinate equal to -1 or extent_i.
using Site = std::vector<int>;

struct Edge {
  int a;  // interior index
  int b;  // interior index
};

struct CrossingEdge {
  int interior;  // interior index
  int boundary;  // boundary index
};

/// Finite rectangular box V in Z^d together with its outer boundary
/// (the sites at lattice distance exactly 1 from V).
///
/// Interior and boundary sites carry fixed lexicographic orders; all bit
/// vectors elsewhere in the library are indexed by these orders. Edge lists
/// contain each unordered pair exactly once.
class BoxGeometry {
 public:
  int dimension() const { return dimension_; }
  const std::vector<int>& extents() const { return extents_; }

  int volume() const { return static_cast<int>(interior_.size()); }
  int boundary_size() const { return static_cast<int>(boundary_.size()); }

  const std::vector<Site>& interior_sites() const { return interior_; }
  const std::vector<Site>& boundary_sites() const { return boundary_; }
  const std::vector<Edge>& interior_edges() const { return interior_edges_; }
  const std::vector<CrossingEdge>& crossing_edges() const { return crossing_edges_; }

  /// Interior indices adjacent to interior site i.
  const std::vector<int>& interior_neighbors(int i) const { return interior_nbrs_[i]; }
  /// Boundary indices adjacent to interior site i.
  const std::vector<int>& crossing_neighbors(int i) const { return crossing_nbrs_[i]; }
  /// Interior indices adjacent to boundary site b.
  const std::vector<int>& boundary_interior_neighbors(int b) const { return boundary_interior_nbrs_[b]; }
  /// Boundary indices adjacent to boundary site b (needed when a boundary
  /// site is promoted to a spin variable).
  const std::vector<int>& boundary_boundary_neighbors(int b) const { return boundary_boundary_nbrs_[b]; }

  std::optional<int> interior_index(const Site& s) const;
  std::optional<int> boundary_index(const Site& s) const;

  /// Canonical identifier, e.g. "d=2;extents=3x4".
  std::string id() const;

  friend BoxGeometry build_box(int dimension, const std::vector<int>& extents);

 private:
  int dimension_ = 0;
  std::vector<int> extents_;
  std::vector<Site> interior_;
  std::vector<Site> boundary_;
  std::vector<Edge> interior_edges_;
  std::vector<CrossingEdge> crossing_edges_;
  std::vector<std::vector<int>> interior_nbrs_;
  std::vector<std::vector<int>> crossing_nbrs_;
  std::vector<std::vector<int>> boundary_interior_nbrs_;
  std::vector<std::vector<int>> boundary_boundary_nbrs_;
};

/// Builds the box with the given extents. Throws std::invalid_argument for
/// non-positive dimension/extents and for volumes beyond 24 sites (the
/// enumeration kernels address configurations with one bit per site).
BoxGeometry build_box(int dimension, const std::vector<int>& extents);

/// Largest volume for which enumeration kernels may run.
inline constexpr int kMaxEnumerationVolume = 24;
/// Largest volume for which explicit probability tables are materialized.
inline constexpr int kMaxTableVolume = 20;

}  // namespace dscert
