#include "dscert/orbits.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dscert {

namespace {

Site apply_symmetry(const BoxSymmetry& sym, const std::vector<int>& extents, const Site& s) {
  const int d = static_cast<int>(extents.size());
  Site out(d);
  for (int i = 0; i < d; ++i) {
    const int x = s[sym.axis_perm[i]];
    out[i] = sym.axis_flip[i] ? (extents[i] - 1 - x) : x;
  }
  return out;
}

}  // namespace

std::vector<BoxSymmetry> box_symmetries(const BoxGeometry& g) {
  const int d = g.dimension();
  const auto& ext = g.extents();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<BoxSymmetry> out;
  do {
    bool valid = true;
    for (int i = 0; i < d && valid; ++i) valid = (ext[perm[i]] == ext[i]);
    if (!valid) continue;
    for (unsigned flips = 0; flips < (1u << d); ++flips) {
      BoxSymmetry sym;
      sym.axis_perm = perm;
      sym.axis_flip.resize(d);
      for (int i = 0; i < d; ++i) sym.axis_flip[i] = (flips >> i) & 1u;
      out.push_back(std::move(sym));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<int> boundary_permutation(const BoxGeometry& g, const BoxSymmetry& sym) {
  std::vector<int> perm(g.boundary_size());
  for (int b = 0; b < g.boundary_size(); ++b) {
    const Site image = apply_symmetry(sym, g.extents(), g.boundary_sites()[b]);
    const auto idx = g.boundary_index(image);
    if (!idx) throw std::runtime_error("boundary_permutation: image not a boundary site");
    perm[b] = *idx;
  }
  return perm;
}

std::vector<BoundarySiteClass> boundary_site_classes(const BoxGeometry& g) {
  const int nb = g.boundary_size();
  std::vector<std::vector<int>> perms;
  for (const BoxSymmetry& sym : box_symmetries(g)) perms.push_back(boundary_permutation(g, sym));

  std::vector<int> cls(nb, -1);
  std::vector<BoundarySiteClass> out;
  for (int b = 0; b < nb; ++b) {
    if (cls[b] >= 0) continue;
    BoundarySiteClass c;
    c.representative = b;
    for (const auto& p : perms) {
      const int img = p[b];
      if (cls[img] < 0) {
        cls[img] = static_cast<int>(out.size());
        c.members.push_back(img);
        c.member_maps.push_back(p);
      }
    }
    // Keep members (and their maps) in ascending order; the representative
    // is the smallest, reached first.
    std::vector<std::size_t> order(c.members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b2) { return c.members[a] < c.members[b2]; });
    BoundarySiteClass sorted;
    sorted.representative = b;
    for (std::size_t k : order) {
      sorted.members.push_back(c.members[k]);
      sorted.member_maps.push_back(c.member_maps[k]);
    }
    out.push_back(std::move(sorted));
  }
  return out;
}

OrbitSet boundary_orbits(const BoxGeometry& g, int flip_site, bool use_symmetry) {
  const int nb = g.boundary_size();
  if (flip_site < 0 || flip_site >= nb)
    throw std::invalid_argument("boundary_orbits: flip site out of range");
  if (nb - 1 > 24)
    throw std::invalid_argument("boundary_orbits: boundary too large to enumerate");

  const std::uint64_t raw = std::uint64_t{1} << (nb - 1);
  OrbitSet out;
  out.raw_count = raw;

  const std::uint64_t low_mask = (std::uint64_t{1} << flip_site) - 1;
  const std::uint64_t full_mask =
      ((nb == 64) ? ~0ull : ((std::uint64_t{1} << nb) - 1)) & ~(std::uint64_t{1} << flip_site);
  auto expand = [&](std::uint64_t compact) {
    return (compact & low_mask) | ((compact & ~low_mask) << 1);
  };
  auto compact = [&](std::uint64_t full) {
    return (full & low_mask) | ((full >> 1) & ~low_mask);
  };

  if (!use_symmetry) {
    out.orbits.reserve(raw);
    for (std::uint64_t k = 0; k < raw; ++k) out.orbits.push_back({expand(k), 1});
    return out;
  }

  // Index permutations from box symmetries fixing the flip site.
  std::vector<std::vector<int>> perms;
  for (const BoxSymmetry& sym : box_symmetries(g)) {
    std::vector<int> p = boundary_permutation(g, sym);
    if (p[flip_site] == flip_site) perms.push_back(std::move(p));
  }

  auto apply_perm = [&](const std::vector<int>& p, std::uint64_t bits) {
    std::uint64_t img = 0;
    std::uint64_t rest = bits;
    while (rest) {
      const int i = std::countr_zero(rest);
      img |= std::uint64_t{1} << p[i];
      rest &= rest - 1;
    }
    return img;
  };

  for (std::uint64_t k = 0; k < raw; ++k) {
    const std::uint64_t pattern = expand(k);
    std::uint64_t canon = ~0ull;
    std::vector<std::uint64_t> images;
    images.reserve(2 * perms.size());
    for (const auto& p : perms) {
      const std::uint64_t img = apply_perm(p, pattern);
      images.push_back(img);
      images.push_back((~img) & full_mask);  // global spin flip
    }
    for (std::uint64_t img : images) canon = std::min(canon, compact(img));
    if (canon != k) continue;
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    out.orbits.push_back({pattern, images.size()});
  }
  return out;
}

}  // namespace dscert
