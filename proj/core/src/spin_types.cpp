#include "dscert/spin_types.hpp"

#include <bit>
#include <stdexcept>

namespace dscert {

namespace {

void trim(std::vector<std::uint64_t>& words) {
  while (!words.empty() && words.back() == 0) words.pop_back();
}

}  // namespace

bool BoundaryCondition::fits(int n) const {
  for (int w = static_cast<int>(words.size()) - 1; w >= 0; --w) {
    if (words[w] == 0) continue;
    const int top = w * 64 + 63 - std::countl_zero(words[w]);
    return top < n;
  }
  return true;
}

BoundaryCondition BoundaryCondition::flipped(int site) const {
  BoundaryCondition out = *this;
  const std::size_t w = static_cast<std::size_t>(site) >> 6;
  if (out.words.size() <= w) out.words.resize(w + 1, 0);
  out.words[w] ^= 1ull << (site & 63);
  trim(out.words);
  return out;
}

BoundaryCondition BoundaryCondition::with_plus(int site) const {
  BoundaryCondition out = *this;
  const std::size_t w = static_cast<std::size_t>(site) >> 6;
  if (out.words.size() <= w) out.words.resize(w + 1, 0);
  out.words[w] |= 1ull << (site & 63);
  return out;
}

BoundaryCondition BoundaryCondition::complemented(int n) const {
  BoundaryCondition out;
  out.words.assign((static_cast<std::size_t>(n) + 63) / 64, 0);
  for (std::size_t w = 0; w < out.words.size(); ++w) {
    const std::uint64_t have = (w < words.size()) ? words[w] : 0ull;
    out.words[w] = ~have;
  }
  const int tail = n & 63;
  if (tail != 0 && !out.words.empty()) out.words.back() &= (1ull << tail) - 1;
  trim(out.words);
  return out;
}

std::string BoundaryCondition::to_string(int n) const {
  std::string out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(spin(i) > 0 ? '+' : '-');
  return out;
}

BoundaryCondition all_plus_boundary(int n) {
  if (n < 0) throw std::invalid_argument("all_plus_boundary: negative size");
  BoundaryCondition out;
  out.words.assign((static_cast<std::size_t>(n) + 63) / 64, ~0ull);
  const int tail = n & 63;
  if (tail != 0 && !out.words.empty()) out.words.back() &= (1ull << tail) - 1;
  return out;
}

bool FieldAssignment::is_zero() const {
  for (double x : values)
    if (x != 0.0) return false;
  return true;
}

}  // namespace dscert
