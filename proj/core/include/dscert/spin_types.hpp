#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dscert {

/// Spins on the interior of a box, packed one bit per site in the
/// BoxGeometry interior order. Bit set means sigma = +1, clear means -1.
/// Only enumeration-sized boxes (|V| <= 24) use this type.
struct SpinConfiguration {
  std::uint32_t bits = 0;

  int spin(int i) const { return ((bits >> i) & 1u) ? +1 : -1; }
  bool operator==(const SpinConfiguration&) const = default;
};

/// Spins on the boundary of a box, packed in the BoxGeometry boundary
/// order. Stored as 64-bit blocks so tall transfer-matrix strips (boundaries
/// of tens of thousands of sites) are representable; trailing zero blocks
/// are trimmed so equal boundaries compare equal.
struct BoundaryCondition {
  std::vector<std::uint64_t> words;

  BoundaryCondition() = default;
  explicit BoundaryCondition(std::uint64_t low) {
    if (low) words.push_back(low);
  }

  int spin(int i) const {
    const std::size_t w = static_cast<std::size_t>(i) >> 6;
    if (w >= words.size()) return -1;
    return ((words[w] >> (i & 63)) & 1ull) ? +1 : -1;
  }

  /// True when no bit at position >= n is set.
  bool fits(int n) const;

  /// Boundary with the spin at one site negated.
  BoundaryCondition flipped(int site) const;

  /// Boundary with the spin at one site forced to +1.
  BoundaryCondition with_plus(int site) const;

  /// Boundary with every one of the n spins negated.
  BoundaryCondition complemented(int n) const;

  /// Low 64 bits; valid whenever the boundary has at most 64 sites.
  std::uint64_t word64() const { return words.empty() ? 0ull : words[0]; }

  /// "+-++..." in boundary order; used in reports.
  std::string to_string(int n) const;

  bool operator==(const BoundaryCondition&) const = default;
};

/// All-plus boundary for a box with n boundary sites.
BoundaryCondition all_plus_boundary(int n);

/// Per-site magnetic field on the interior (energy per spin).
/// Fields enter the Gibbs weight directly, not multiplied by beta.
struct FieldAssignment {
  std::vector<double> values;

  static FieldAssignment zeros(int n) { return {std::vector<double>(n, 0.0)}; }
  bool is_zero() const;
  int size() const { return static_cast<int>(values.size()); }
};

enum class BoundaryMode {
  kFixed,  // crossing edges couple to the given boundary spins
  kFree,   // crossing edges dropped entirely
};

/// Explicit probability vector over all 2^|V| spin configurations,
/// indexed by SpinConfiguration bits, plus the log partition function.
struct DistributionTable {
  std::vector<double> probabilities;
  double log_z = 0.0;

  int size() const { return static_cast<int>(probabilities.size()); }
};

}  // namespace dscert
