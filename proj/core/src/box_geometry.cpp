#include "dscert/box_geometry.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dscert {

namespace {

bool lex_less(const Site& a, const Site& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::optional<int> BoxGeometry::interior_index(const Site& s) const {
  if (static_cast<int>(s.size()) != dimension_) return std::nullopt;
  // Lexicographic order makes the index a mixed-radix number.
  long long idx = 0;
  for (int i = 0; i < dimension_; ++i) {
    if (s[i] < 0 || s[i] >= extents_[i]) return std::nullopt;
    idx = idx * extents_[i] + s[i];
  }
  return static_cast<int>(idx);
}

std::optional<int> BoxGeometry::boundary_index(const Site& s) const {
  auto it = std::lower_bound(boundary_.begin(), boundary_.end(), s, lex_less);
  if (it == boundary_.end() || *it != s) return std::nullopt;
  return static_cast<int>(it - boundary_.begin());
}

std::string BoxGeometry::id() const {
  std::ostringstream out;
  out << "d=" << dimension_ << ";extents=";
  for (int i = 0; i < dimension_; ++i) {
    if (i) out << 'x';
    out << extents_[i];
  }
  return out.str();
}

BoxGeometry build_box(int dimension, const std::vector<int>& extents) {
  if (dimension < 1) throw std::invalid_argument("build_box: dimension must be >= 1");
  if (static_cast<int>(extents.size()) != dimension)
    throw std::invalid_argument("build_box: extents size must equal dimension");
  long long volume = 1;
  for (int e : extents) {
    if (e < 1) throw std::invalid_argument("build_box: extents must be >= 1");
    volume *= e;
    if (volume > (1 << 20))
      throw std::invalid_argument("build_box: box too large");
  }

  BoxGeometry g;
  g.dimension_ = dimension;
  g.extents_ = extents;

  // Interior sites in lexicographic order.
  Site cur(dimension, 0);
  for (;;) {
    g.interior_.push_back(cur);
    int axis = dimension - 1;
    while (axis >= 0 && ++cur[axis] == extents[axis]) cur[axis--] = 0;
    if (axis < 0) break;
  }

  // Boundary: every exterior neighbor of an interior site, deduplicated,
  // then sorted lexicographically to fix the boundary order.
  std::map<Site, int> boundary_set;
  for (const Site& s : g.interior_) {
    for (int axis = 0; axis < dimension; ++axis) {
      for (int dir : {-1, +1}) {
        Site n = s;
        n[axis] += dir;
        if (!g.interior_index(n)) boundary_set.emplace(n, 0);
      }
    }
  }
  g.boundary_.reserve(boundary_set.size());
  for (auto& [site, idx] : boundary_set) {
    idx = static_cast<int>(g.boundary_.size());
    g.boundary_.push_back(site);
  }

  g.interior_nbrs_.resize(g.interior_.size());
  g.crossing_nbrs_.resize(g.interior_.size());
  g.boundary_interior_nbrs_.resize(g.boundary_.size());
  g.boundary_boundary_nbrs_.resize(g.boundary_.size());

  for (int i = 0; i < static_cast<int>(g.interior_.size()); ++i) {
    for (int axis = 0; axis < dimension; ++axis) {
      for (int dir : {-1, +1}) {
        Site n = g.interior_[i];
        n[axis] += dir;
        if (auto j = g.interior_index(n)) {
          g.interior_nbrs_[i].push_back(*j);
          if (i < *j) g.interior_edges_.push_back({i, *j});
        } else {
          const int b = boundary_set.at(n);
          g.crossing_nbrs_[i].push_back(b);
          g.crossing_edges_.push_back({i, b});
          g.boundary_interior_nbrs_[b].push_back(i);
        }
      }
    }
  }

  // Boundary-boundary adjacency (used when a boundary site joins the box).
  for (int b = 0; b < static_cast<int>(g.boundary_.size()); ++b) {
    for (int axis = 0; axis < dimension; ++axis) {
      for (int dir : {-1, +1}) {
        Site n = g.boundary_[b];
        n[axis] += dir;
        if (auto j = g.boundary_index(n)) g.boundary_boundary_nbrs_[b].push_back(*j);
      }
    }
  }

  for (auto& v : g.interior_nbrs_) std::sort(v.begin(), v.end());
  for (auto& v : g.crossing_nbrs_) std::sort(v.begin(), v.end());
  for (auto& v : g.boundary_interior_nbrs_) std::sort(v.begin(), v.end());
  for (auto& v : g.boundary_boundary_nbrs_) std::sort(v.begin(), v.end());

  return g;
}

}  // namespace dscert
