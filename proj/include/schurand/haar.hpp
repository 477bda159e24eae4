#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "schurand/linalg.hpp"
#include "schurand/rng.hpp"
#include "schurand/schur.hpp"

namespace schurand {

using cplx = std::complex<double>;

// Sector bookkeeping without the change-of-basis matrix; usable far beyond
// the dense cap (sampling and exact moments only touch d_lambda x d_lambda
// blocks).
struct SectorLayout {
  int n = 0;
  int d = 0;
  long long dim = 0;  // d^n
  std::vector<SectorInfo> sectors;
};

inline SectorLayout layout_for(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("layout_for: need n >= 1, d >= 1");
  SectorLayout layout;
  layout.n = n;
  layout.d = d;
  layout.dim = pow_ll(d, n);
  long long offset = 0;
  for (const Partition& lam : enumerate_partitions(n, d)) {
    long long mult = weyl_multiplicity(lam, d);
    if (mult == 0) continue;
    SectorInfo s;
    s.lambda = lam;
    s.dim = hook_dimension(lam);
    s.mult = mult;
    s.offset = offset;
    offset += s.size();
    layout.sectors.push_back(s);
  }
  if (offset != layout.dim) throw std::logic_error("sector layout does not sum to d^n");
  return layout;
}

inline SectorLayout layout_of(const SchurBasis& basis) {
  SectorLayout layout;
  layout.n = basis.n;
  layout.d = basis.d;
  layout.dim = basis.dim;
  layout.sectors = basis.sectors;
  return layout;
}

// An SU(d)-symmetric unitary: one independent unitary per sector, acting as
// blkdiag_lambda( I_{m_lambda} (x) u_lambda ) in the Schur basis.
struct SymmetricUnitary {
  int n = 0;
  int d = 0;
  std::vector<Eigen::MatrixXcd> blocks;  // aligned with SectorLayout::sectors

  // Dense matrix in the Schur basis (needs dim within the dense cap).
  Eigen::MatrixXcd block_diagonal(const SectorLayout& layout) const {
    if (layout.dim > kDenseCap)
      throw budget_error("block_diagonal: dimension exceeds dense cap");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
    for (std::size_t si = 0; si < layout.sectors.size(); ++si) {
      const SectorInfo& s = layout.sectors[si];
      for (long long m = 0; m < s.mult; ++m)
        u.block(s.offset + m * s.dim, s.offset + m * s.dim, s.dim, s.dim) = blocks[si];
    }
    return u;
  }

  // Dense matrix in the computational basis.
  Eigen::MatrixXcd dense_computational(const SchurBasis& basis) const {
    return from_schur(block_diagonal(layout_of(basis)), basis);
  }
};

// One Haar-distributed unitary on U(dim): complex Ginibre -> QR -> right
// phase correction making the triangular factor's diagonal real positive.
// Entries are consumed from the stream row-major, so a (seed, stream_id)
// pair fixes the draw bit-for-bit.
inline Eigen::MatrixXcd haar_block(long long dim, RngStream& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (long long i = 0; i < dim; ++i)
    for (long long j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long long j = 0; j < dim; ++j) {
    cplx rjj = r(j, j);
    double mag = std::abs(rjj);
    cplx phase = (mag > 0.0) ? rjj / mag : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

// One Haar draw per sector, consumed in layout order.
inline SymmetricUnitary sample(const SectorLayout& layout, RngStream& rng) {
  SymmetricUnitary u;
  u.n = layout.n;
  u.d = layout.d;
  u.blocks.reserve(layout.sectors.size());
  for (const SectorInfo& s : layout.sectors) u.blocks.push_back(haar_block(s.dim, rng));
  return u;
}

namespace detail {

inline Eigen::MatrixXcd sector_block(const Eigen::MatrixXcd& x, const SectorInfo& row,
                                     const SectorInfo& col) {
  return x.block(row.offset, col.offset, row.size(), col.size());
}

// Partial trace over the irrep factor of a sector-diagonal block
// (multiplicity-major layout): result is m x m.
inline Eigen::MatrixXcd ptr_irrep(const Eigen::MatrixXcd& block, long long mult,
                                  long long dl) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(mult, mult);
  for (long long a = 0; a < mult; ++a)
    for (long long b = 0; b < mult; ++b) {
      cplx acc = 0.0;
      for (long long s = 0; s < dl; ++s) acc += block(a * dl + s, b * dl + s);
      out(a, b) = acc;
    }
  return out;
}

// The sector first-moment channel Phi(M) = (ptr_irrep M / d_lambda) (x) I.
inline Eigen::MatrixXcd sector_first_moment(const Eigen::MatrixXcd& block,
                                            long long mult, long long dl) {
  if (dl == 1) return block;
  Eigen::MatrixXcd pm = ptr_irrep(block, mult, dl) / static_cast<double>(dl);
  return kron(pm, Eigen::MatrixXcd::Identity(dl, dl));
}

}  // namespace detail

// E[U x U^dag] for x given in the Schur basis: cross-sector blocks vanish,
// diagonal blocks pass through the per-sector channel.
inline Eigen::MatrixXcd first_moment(const Eigen::MatrixXcd& x, const SectorLayout& layout) {
  if (x.rows() != layout.dim || x.cols() != layout.dim)
    throw std::invalid_argument("first_moment: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
  for (const SectorInfo& s : layout.sectors)
    out.block(s.offset, s.offset, s.size(), s.size()) = detail::sector_first_moment(
        detail::sector_block(x, s, s), s.mult, s.dim);
  return out;
}

// E_{U(D)}[Tr(U a U^dag b U c U^dag e)] by the fourth-moment Weingarten
// formula; D = 1 degenerates to Tr(a b c e).
inline cplx haar_quartic_trace(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                               const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& e) {
  const long long D = a.rows();
  if (a.cols() != D || b.rows() != D || b.cols() != D || c.rows() != D ||
      c.cols() != D || e.rows() != D || e.cols() != D)
    throw std::invalid_argument("haar_quartic_trace: dimension mismatch");
  if (D == 1) return a(0, 0) * b(0, 0) * c(0, 0) * e(0, 0);
  cplx tra = a.trace(), trb = b.trace(), trc = c.trace(), tre = e.trace();
  cplx trac = (a * c).trace(), trbe = (b * e).trace();
  double dd = static_cast<double>(D);
  double d2m1 = dd * dd - 1.0;
  return (tra * trc * trbe + trac * trb * tre) / d2m1 -
         (trac * trbe + tra * trc * trb * tre) / (dd * d2m1);
}

// Same quantity from precomputed traces (scales to large D where the blocks
// themselves are never formed). The D = 1 case needs the full product trace,
// so it must be handled by the caller.
inline cplx haar_quartic_trace_from_traces(cplx tra, cplx trb, cplx trc, cplx tre,
                                           cplx trac, cplx trbe, long long D) {
  if (D <= 1)
    throw std::invalid_argument("haar_quartic_trace_from_traces: need D >= 2");
  double dd = static_cast<double>(D);
  double d2m1 = dd * dd - 1.0;
  return (tra * trc * trbe + trac * trb * tre) / d2m1 -
         (trac * trbe + tra * trc * trb * tre) / (dd * d2m1);
}

// Coefficients of E[(UwU^dag) (x) (UwU^dag)] = alpha I(x)I + beta Swap.
// For D = 1 the pair is deterministic: alpha = w^2, beta = 0.
inline std::pair<cplx, cplx> pair_moment(const Eigen::MatrixXcd& w) {
  const long long D = w.rows();
  if (w.cols() != D) throw std::invalid_argument("pair_moment: square matrix required");
  if (D == 1) return {w(0, 0) * w(0, 0), cplx(0.0, 0.0)};
  cplx trw = w.trace();
  cplx trw2 = (w * w).trace();
  double dd = static_cast<double>(D);
  double den = dd * (dd * dd - 1.0);
  return {(dd * trw * trw - trw2) / den, (dd * trw2 - trw * trw) / den};
}

// Exact E[Tr(W~ P W~ P)] with W~ = U W U^dag, W symmetric (one block per
// sector, acting as I_m (x) W_lambda), P an arbitrary matrix in the Schur
// basis. Cross-sector terms factor through first moments; sector-diagonal
// terms use the pair moment.
inline double mixed_block_otoc(const std::vector<Eigen::MatrixXcd>& w_blocks,
                               const Eigen::MatrixXcd& p, const SectorLayout& layout) {
  if (w_blocks.size() != layout.sectors.size())
    throw std::invalid_argument("mixed_block_otoc: one W block per sector required");
  if (p.rows() != layout.dim || p.cols() != layout.dim)
    throw std::invalid_argument("mixed_block_otoc: probe dimension mismatch");

  cplx total = 0.0;
  const std::size_t ns = layout.sectors.size();
  for (std::size_t vi = 0; vi < ns; ++vi) {
    const SectorInfo& v = layout.sectors[vi];
    if (w_blocks[vi].rows() != v.dim || w_blocks[vi].cols() != v.dim)
      throw std::invalid_argument("mixed_block_otoc: W block has wrong size");

    // Sector-diagonal contribution.
    Eigen::MatrixXcd pvv = detail::sector_block(p, v, v);
    auto [alpha, beta] = pair_moment(w_blocks[vi]);
    cplx tr_pp = (pvv * pvv).trace();
    Eigen::MatrixXcd pm = detail::ptr_irrep(pvv, v.mult, v.dim);
    cplx tr_pmpm = (pm * pm).trace();
    total += alpha * tr_pp + beta * tr_pmpm;

    // Cross-sector contributions (ordered pairs).
    for (std::size_t mi = 0; mi < ns; ++mi) {
      if (mi == vi) continue;
      const SectorInfo& m = layout.sectors[mi];
      cplx fv = w_blocks[vi].trace() / static_cast<double>(v.dim);
      cplx fm = w_blocks[mi].trace() / static_cast<double>(m.dim);
      Eigen::MatrixXcd pvm = detail::sector_block(p, v, m);
      Eigen::MatrixXcd pmv = detail::sector_block(p, m, v);
      total += fv * fm * (pvm * pmv).trace();
    }
  }
  if (std::abs(total.imag()) > 1e-9 * (1.0 + std::abs(total.real())))
    throw std::logic_error("mixed_block_otoc: nonreal result");
  return total.real();
}

// Exact E[Tr(U a1 U^dag b1 U a2 U^dag b2)] for a block-diagonal symmetric
// Haar U and arbitrary matrices in the Schur basis. Sector-diagonal pieces
// use the fourth-moment Weingarten patterns on C^m (x) C^D; pieces touching
// two sectors factor through independent first moments; everything else
// averages to zero.
inline cplx second_moment_trace(const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& b1,
                                const Eigen::MatrixXcd& a2, const Eigen::MatrixXcd& b2,
                                const SectorLayout& layout) {
  const long long dim = layout.dim;
  if (a1.rows() != dim || b1.rows() != dim || a2.rows() != dim || b2.rows() != dim ||
      a1.cols() != dim || b1.cols() != dim || a2.cols() != dim || b2.cols() != dim)
    throw std::invalid_argument("second_moment_trace: dimension mismatch");

  const std::size_t ns = layout.sectors.size();
  cplx total = 0.0;

  for (std::size_t vi = 0; vi < ns; ++vi) {
    const SectorInfo& v = layout.sectors[vi];
    const long long m = v.mult, D = v.dim;
    Eigen::MatrixXcd a = detail::sector_block(a1, v, v);
    Eigen::MatrixXcd b = detail::sector_block(b1, v, v);
    Eigen::MatrixXcd c = detail::sector_block(a2, v, v);
    Eigen::MatrixXcd e = detail::sector_block(b2, v, v);
    if (D == 1) {
      total += (a * b * c * e).trace();
      continue;
    }
    Eigen::MatrixXcd pa = detail::ptr_irrep(a, m, D);
    Eigen::MatrixXcd pb = detail::ptr_irrep(b, m, D);
    Eigen::MatrixXcd pc = detail::ptr_irrep(c, m, D);
    Eigen::MatrixXcd pe = detail::ptr_irrep(e, m, D);
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(D, D);

    cplx pattern1 = (kron(pa, eye) * b * kron(pc, eye) * e).trace();
    cplx pattern4 = (detail::ptr_irrep(a * kron(pb, eye) * c, m, D) * pe).trace();
    cplx pattern3 = (pa * pb * pc * pe).trace();

    cplx pattern2 = 0.0;
    for (long long al = 0; al < m; ++al)
      for (long long be = 0; be < m; ++be)
        for (long long ga = 0; ga < m; ++ga)
          for (long long de = 0; de < m; ++de) {
            cplx g1 = 0.0, g2 = 0.0;
            for (long long s = 0; s < D; ++s)
              for (long long t = 0; t < D; ++t) {
                g1 += a(al * D + s, be * D + t) * c(ga * D + t, de * D + s);
                g2 += b(be * D + s, ga * D + t) * e(de * D + t, al * D + s);
              }
            pattern2 += g1 * g2;
          }

    double dd = static_cast<double>(D);
    double d2m1 = dd * dd - 1.0;
    total += (pattern1 + pattern4) / d2m1 - (pattern2 + pattern3) / (dd * d2m1);
  }

  // nu != rho: E[A1~]^{nu nu} B1^{nu rho} E[A2~]^{rho rho} B2^{rho nu}.
  for (std::size_t vi = 0; vi < ns; ++vi)
    for (std::size_t ri = 0; ri < ns; ++ri) {
      if (vi == ri) continue;
      const SectorInfo& v = layout.sectors[vi];
      const SectorInfo& r = layout.sectors[ri];
      Eigen::MatrixXcd phi_a1 =
          detail::sector_first_moment(detail::sector_block(a1, v, v), v.mult, v.dim);
      Eigen::MatrixXcd phi_a2 =
          detail::sector_first_moment(detail::sector_block(a2, r, r), r.mult, r.dim);
      total += (phi_a1 * detail::sector_block(b1, v, r) * phi_a2 *
                detail::sector_block(b2, r, v))
                   .trace();
    }

  // nu != mu: Phi_nu(A1^{nu mu} Phi_mu(B1^{mu mu}) A2^{mu nu}) B2^{nu nu}.
  for (std::size_t vi = 0; vi < ns; ++vi)
    for (std::size_t mi = 0; mi < ns; ++mi) {
      if (vi == mi) continue;
      const SectorInfo& v = layout.sectors[vi];
      const SectorInfo& m = layout.sectors[mi];
      Eigen::MatrixXcd phi_b1 =
          detail::sector_first_moment(detail::sector_block(b1, m, m), m.mult, m.dim);
      Eigen::MatrixXcd inner = detail::sector_block(a1, v, m) * phi_b1 *
                               detail::sector_block(a2, m, v);
      total += (detail::sector_first_moment(inner, v.mult, v.dim) *
                detail::sector_block(b2, v, v))
                   .trace();
    }

  return total;
}

}  // namespace schurand
