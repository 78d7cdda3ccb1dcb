#include "dscert/transfer_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace dscert {

namespace {

// Column layout: the state axis is the shorter extent (the column height H),
// the sweep runs over the W columns of the longer axis. Interior site
// (row i, column j) keeps its BoxGeometry index through `site_index`.
struct Layout {
  int height = 0;
  int width = 0;
  int state_axis = 0;
  const BoxGeometry* g = nullptr;

  int site_index(int row, int col) const {
    const auto& ext = g->extents();
    int x0, x1;
    if (state_axis == 0) {
      x0 = row;
      x1 = col;
    } else {
      x0 = col;
      x1 = row;
    }
    return x0 * ext[1] + x1;
  }
};

Layout make_layout(const BoxGeometry& g) {
  if (g.dimension() != 2)
    throw std::invalid_argument("transfer: requires a two-dimensional box");
  Layout lay;
  lay.g = &g;
  const int l0 = g.extents()[0];
  const int l1 = g.extents()[1];
  lay.state_axis = (l0 <= l1) ? 0 : 1;
  lay.height = std::min(l0, l1);
  lay.width = std::max(l0, l1);
  if (lay.height > kMaxTransferHeight)
    throw std::invalid_argument("transfer: min extent exceeds 20");
  if (static_cast<long long>(lay.width) << lay.height > (1ll << 26))
    throw std::invalid_argument("transfer: box too large for stored column vectors");
  return lay;
}

struct ColumnModel {
  Layout lay;
  double beta = 0.0;
  int states = 0;
  std::vector<int> vertical;       // sum of adjacent-row products per state
  std::vector<double> site_field;  // beta*c_x + h_x per interior site
  double eps = 0.0;                // exp(-2 beta), the off-diagonal row factor
};

ColumnModel make_model(const BoxGeometry& g, double beta, const FieldAssignment& h,
                       BoundaryCondition b, BoundaryMode mode) {
  if (beta < 0.0) throw std::invalid_argument("transfer: beta must be >= 0");
  ColumnModel m;
  m.lay = make_layout(g);
  m.beta = beta;
  m.states = 1 << m.lay.height;
  m.eps = std::exp(-2.0 * beta);

  m.vertical.resize(m.states);
  const int pairs = m.lay.height - 1;
  const std::uint32_t pair_mask = (pairs > 0) ? ((1u << pairs) - 1u) : 0u;
  for (int s = 0; s < m.states; ++s) {
    const int differing = std::popcount((static_cast<std::uint32_t>(s) ^ (s >> 1)) & pair_mask);
    m.vertical[s] = pairs - 2 * differing;
  }

  m.site_field.assign(g.volume(), 0.0);
  if (mode == BoundaryMode::kFixed)
    for (const CrossingEdge& e : g.crossing_edges())
      m.site_field[e.interior] += beta * b.spin(e.boundary);
  if (!h.values.empty())
    for (int x = 0; x < g.volume(); ++x) m.site_field[x] += h.values[x];
  return m;
}

// Exponent of column j for every state: beta*vertical + sum_i a_i s_i,
// built by a subset DP over the set bits.
void column_exponents(const ColumnModel& m, int col, std::vector<double>& out) {
  const int H = m.lay.height;
  out.resize(m.states);
  double base = 0.0;
  std::vector<double> coeff(H);
  for (int i = 0; i < H; ++i) {
    coeff[i] = m.site_field[m.lay.site_index(i, col)];
    base -= coeff[i];
  }
  out[0] = base + m.beta * m.vertical[0];
  std::vector<double> fieldsum(m.states);
  fieldsum[0] = base;
  for (int s = 1; s < m.states; ++s) {
    const int low = std::countr_zero(static_cast<std::uint32_t>(s));
    fieldsum[s] = fieldsum[s & (s - 1)] + 2.0 * coeff[low];
    out[s] = fieldsum[s] + m.beta * m.vertical[s];
  }
}

// v <- T v for the inter-column coupling, factorized row by row:
// per row the 2x2 kernel is exp(beta) * [[1, eps], [eps, 1]]. The caller
// accounts for the pulled-out factor beta*H in the running log scale.
void apply_coupling(const ColumnModel& m, std::vector<double>& v) {
  const int H = m.lay.height;
  for (int r = 0; r < H; ++r) {
    const int bit = 1 << r;
    for (int s = 0; s < m.states; ++s) {
      if (s & bit) continue;
      const double lo = v[s];
      const double hi = v[s | bit];
      v[s] = lo + m.eps * hi;
      v[s | bit] = hi + m.eps * lo;
    }
  }
}

// Multiplies in the column weights and renormalizes; returns the log of the
// absorbed scale.
double absorb_column(const std::vector<double>& expo, std::vector<double>& v) {
  double peak = expo[0];
  for (double e : expo) peak = std::max(peak, e);
  double mx = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    v[s] *= std::exp(expo[s] - peak);
    mx = std::max(mx, v[s]);
  }
  if (!(mx > 0.0)) throw std::runtime_error("transfer: column vector vanished");
  const double inv = 1.0 / mx;
  for (double& x : v) x *= inv;
  return peak + std::log(mx);
}

}  // namespace

double transfer_log_z(const BoxGeometry& g, double beta, const FieldAssignment& h,
                      BoundaryCondition b, BoundaryMode mode) {
  const ColumnModel m = make_model(g, beta, h, b, mode);
  const int W = m.lay.width;

  std::vector<double> v(m.states, 1.0);
  std::vector<double> expo;
  double scale = 0.0;
  column_exponents(m, 0, expo);
  scale += absorb_column(expo, v);
  for (int j = 1; j < W; ++j) {
    apply_coupling(m, v);
    scale += beta * m.lay.height;
    column_exponents(m, j, expo);
    scale += absorb_column(expo, v);
  }
  double total = 0.0;
  for (double x : v) total += x;
  return scale + std::log(total);
}

TransferResult transfer_measure(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                BoundaryCondition b, BoundaryMode mode) {
  const ColumnModel m = make_model(g, beta, h, b, mode);
  const int W = m.lay.width;
  const int H = m.lay.height;

  // Forward pass, keeping every normalized column vector.
  std::vector<std::vector<double>> fwd(W);
  std::vector<double> v(m.states, 1.0);
  std::vector<double> expo;
  double scale = 0.0;
  column_exponents(m, 0, expo);
  scale += absorb_column(expo, v);
  fwd[0] = v;
  for (int j = 1; j < W; ++j) {
    apply_coupling(m, v);
    scale += beta * H;
    column_exponents(m, j, expo);
    scale += absorb_column(expo, v);
    fwd[j] = v;
  }

  TransferResult out;
  {
    double total = 0.0;
    for (double x : v) total += x;
    out.log_z = scale + std::log(total);
  }

  // Backward pass; magnetizations come from the ratio at each column, so
  // the running scales cancel and only normalized vectors are needed.
  out.magnetization.assign(g.volume(), 0.0);
  std::vector<double> bwd(m.states, 1.0);
  std::vector<double> prod(m.states);
  for (int j = W - 1; j >= 0; --j) {
    double denom = 0.0;
    for (int s = 0; s < m.states; ++s) {
      prod[s] = fwd[j][s] * bwd[s];
      denom += prod[s];
    }
    for (int r = 0; r < H; ++r) {
      const int bit = 1 << r;
      double plus = 0.0;
      for (int s = 0; s < m.states; ++s)
        if (s & bit) plus += prod[s];
      out.magnetization[m.lay.site_index(r, j)] = (2.0 * plus - denom) / denom;
    }
    if (j > 0) {
      column_exponents(m, j, expo);
      double peak = expo[0];
      for (double e : expo) peak = std::max(peak, e);
      for (int s = 0; s < m.states; ++s) bwd[s] *= std::exp(expo[s] - peak);
      apply_coupling(m, bwd);
      double mx = 0.0;
      for (double x : bwd) mx = std::max(mx, x);
      if (!(mx > 0.0)) throw std::runtime_error("transfer: backward vector vanished");
      const double inv = 1.0 / mx;
      for (double& x : bwd) x *= inv;
    }
  }
  return out;
}

}  // namespace dscert
