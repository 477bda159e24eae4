#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schurand/irrep.hpp"
#include "schurand/partition.hpp"
#include "schurand/util.hpp"

namespace schurand {

// Dense-matrix budget: build_schur_basis refuses anything above this total
// dimension.
inline constexpr long long kDenseCap = 4096;

inline long long pow_ll(int d, int n) {
  __int128 p = 1;
  for (int i = 0; i < n; ++i) {
    p *= d;
    if (p > (static_cast<__int128>(1) << 62))
      throw std::overflow_error("d^n does not fit in 64 bits");
  }
  return static_cast<long long>(p);
}

// Index permutation on (C^d)^{x n} induced by a site permutation sigma
// (one-line notation, entries 1..n): basis state |i_1 ... i_n> with site 1
// most significant maps to the state with j_{sigma(k)} = i_k. The returned
// array satisfies perm[g] = flat index of the image of basis state g.
inline std::vector<long long> site_permutation_indices(int n, int d,
                                                       const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != n)
    throw std::invalid_argument("site permutation has wrong length");
  long long dim = pow_ll(d, n);
  std::vector<long long> out_stride(n);  // stride of site k+1 in the flat index
  out_stride[n - 1] = 1;
  for (int k = n - 2; k >= 0; --k) out_stride[k] = out_stride[k + 1] * d;
  std::vector<long long> perm(dim);
  std::vector<int> digits(n);
  for (long long g = 0; g < dim; ++g) {
    long long rem = g;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rem % d);
      rem /= d;
    }
    long long h = 0;
    for (int k = 0; k < n; ++k) h += digits[k] * out_stride[sigma[k] - 1];
    perm[g] = h;
  }
  return perm;
}

inline std::vector<int> adjacent_swap_one_line(int n, int j) {
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i + 1;
  std::swap(sigma[j - 1], sigma[j]);
  return sigma;
}

// w = P v where P e_g = e_{perm[g]}.
inline Eigen::VectorXd apply_index_permutation(const std::vector<long long>& perm,
                                               const Eigen::VectorXd& v) {
  Eigen::VectorXd w(v.size());
  for (long long g = 0; g < v.size(); ++g) w[perm[g]] = v[g];
  return w;
}

inline Eigen::MatrixXd permutation_matrix(const std::vector<long long>& perm) {
  long long dim = static_cast<long long>(perm.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  for (long long g = 0; g < dim; ++g) p(perm[g], g) = 1.0;
  return p;
}

struct SectorInfo {
  Partition lambda;
  long long dim = 0;     // d_lambda
  long long mult = 0;    // m_lambda
  long long offset = 0;  // first column of this sector in q
  long long size() const { return dim * mult; }
};

struct ColumnLabel {
  int sector = 0;      // index into SchurBasis::sectors
  int mult_index = 0;  // 0-based, ordered by decreasing weight vector
  int gt_index = 0;    // 0-based, last-letter tableau order
};

// Real orthogonal change of basis q realizing the sector decomposition of
// (C^d)^{x n}. Columns are grouped by sector (descending lexicographic
// partition order), multiplicity-major within a sector: column
// offset + m * d_lambda + t carries labels (lambda, m, t). Permutation
// operators conjugate to blkdiag_lambda( I_{m_lambda} (x) pi_lambda ),
// collective rotations u^{(x)n} to blkdiag( A_lambda (x) I_{d_lambda} ).
struct SchurBasis {
  int n = 0;
  int d = 0;
  long long dim = 0;
  Eigen::MatrixXd q;
  std::vector<SectorInfo> sectors;
  std::vector<ColumnLabel> labels;

  const SectorInfo& sector(const Partition& lam) const {
    for (const auto& s : sectors)
      if (s.lambda == lam) return s;
    throw std::invalid_argument("no such sector: " + lam.to_string());
  }
};

inline Eigen::MatrixXd to_schur(const Eigen::MatrixXd& a, const SchurBasis& basis) {
  if (a.rows() != basis.dim || a.cols() != basis.dim)
    throw std::invalid_argument("to_schur: dimension mismatch");
  return basis.q.transpose() * a * basis.q;
}

inline Eigen::MatrixXcd to_schur(const Eigen::MatrixXcd& a, const SchurBasis& basis) {
  if (a.rows() != basis.dim || a.cols() != basis.dim)
    throw std::invalid_argument("to_schur: dimension mismatch");
  return basis.q.transpose().cast<std::complex<double>>() * a *
         basis.q.cast<std::complex<double>>();
}

inline Eigen::MatrixXd from_schur(const Eigen::MatrixXd& a, const SchurBasis& basis) {
  if (a.rows() != basis.dim || a.cols() != basis.dim)
    throw std::invalid_argument("from_schur: dimension mismatch");
  return basis.q * a * basis.q.transpose();
}

inline Eigen::MatrixXcd from_schur(const Eigen::MatrixXcd& a, const SchurBasis& basis) {
  if (a.rows() != basis.dim || a.cols() != basis.dim)
    throw std::invalid_argument("from_schur: dimension mismatch");
  return basis.q.cast<std::complex<double>>() * a *
         basis.q.transpose().cast<std::complex<double>>();
}

enum class SchurMethod { Auto, ClebschGordan, YjmChain };

namespace detail {

inline std::vector<int> state_weight(long long g, int n, int d) {
  std::vector<int> w(d, 0);
  for (int k = 0; k < n; ++k) {
    ++w[g % d];
    g /= d;
  }
  return w;
}

// Reconstructs the standard tableau whose box contents are, in insertion
// order, 0, c[0], c[1], ..., c[n-2].
inline StandardTableau tableau_from_contents(const std::vector<int>& tail_contents, int n) {
  StandardTableau t;
  std::vector<int> shape;  // current row lengths
  for (int k = 1; k <= n; ++k) {
    int want = (k == 1) ? 0 : tail_contents[k - 2];
    int placed_row = -1;
    for (int r = 0; r <= static_cast<int>(shape.size()); ++r) {
      int col = (r < static_cast<int>(shape.size())) ? shape[r] : 0;
      if (col - r != want) continue;
      bool ok = (r == 0) || (shape[r - 1] > col);
      if (!ok) continue;
      placed_row = r;
      break;
    }
    if (placed_row < 0) throw std::logic_error("content vector does not describe a tableau");
    if (placed_row == static_cast<int>(shape.size())) {
      shape.push_back(0);
      t.rows.emplace_back();
    }
    t.rows[placed_row].push_back(k);
    ++shape[placed_row];
  }
  t.shape = Partition(shape);
  return t;
}

// Sign convention shared by both construction paths: within each sector,
// flip whole multiplicity rows so the first nonvanishing amplitude of each
// reference column (gt_index 0) is positive.
inline void fix_reference_signs(SchurBasis& basis) {
  for (const auto& s : basis.sectors) {
    for (long long m = 0; m < s.mult; ++m) {
      long long ref = s.offset + m * s.dim;
      double pivot = 0.0;
      for (long long i = 0; i < basis.dim; ++i)
        if (std::abs(basis.q(i, ref)) > 1e-7) {
          pivot = basis.q(i, ref);
          break;
        }
      if (pivot < 0.0)
        basis.q.middleCols(ref, s.dim) *= -1.0;
    }
  }
}

// Fills the non-reference columns of every sector from the reference columns
// by walking the tableau graph with the orthogonal-form recursion
//   |m, T'> = ( S_j |m, T> - (1/r) |m, T> ) / sqrt(1 - 1/r^2),
// where T' is T with j and j+1 swapped and r is the axial distance in T.
// This is what the group-algebra matrix units E_{T T0} produce, evaluated
// without the n!-term sum.
inline void ladder_fill(SchurBasis& basis, const std::vector<IrrepBlockRep>& reps,
                        const std::vector<std::vector<long long>>& swap_perm) {
  for (std::size_t si = 0; si < basis.sectors.size(); ++si) {
    const SectorInfo& s = basis.sectors[si];
    const IrrepBlockRep& rep = reps[si];
    const int dl = static_cast<int>(s.dim);
    if (dl == 1) continue;

    std::map<std::vector<int>, int> index_of;
    for (int t = 0; t < dl; ++t)
      index_of[tableau_key(rep.tableaux[t], basis.n)] = t;

    std::vector<bool> have(dl, false);
    have[0] = true;
    std::queue<int> frontier;
    frontier.push(0);
    while (!frontier.empty()) {
      int t = frontier.front();
      frontier.pop();
      for (int j = 1; j <= basis.n - 1; ++j) {
        int r = rep.contents[t][j] - rep.contents[t][j - 1];
        if (r == 1 || r == -1) continue;
        StandardTableau swapped = rep.tableaux[t];
        auto [rj, cj] = swapped.position_of(j);
        auto [rj1, cj1] = swapped.position_of(j + 1);
        swapped.rows[rj][cj] = j + 1;
        swapped.rows[rj1][cj1] = j;
        int tp = index_of.at(tableau_key(swapped, basis.n));
        if (have[tp]) continue;
        double inv_r = 1.0 / r;
        double denom = std::sqrt(1.0 - inv_r * inv_r);
        for (long long m = 0; m < s.mult; ++m) {
          Eigen::VectorXd src = basis.q.col(s.offset + m * dl + t);
          Eigen::VectorXd img = apply_index_permutation(swap_perm[j - 1], src);
          basis.q.col(s.offset + m * dl + tp) = (img - inv_r * src) / denom;
        }
        have[tp] = true;
        frontier.push(tp);
      }
    }
    for (int t = 0; t < dl; ++t)
      if (!have[t]) throw std::logic_error("tableau graph not connected");
  }
}

// General-d construction: refine each letter-count weight block by the
// commuting family X_2, ..., X_n, keep the joint eigenspaces whose content
// vector matches the reference tableau of some sector (these are the
// multiplicity vectors at gt_index 0), then ladder-fill the rest.
inline void build_yjm(SchurBasis& basis, const std::vector<IrrepBlockRep>& reps,
                      const std::vector<std::vector<long long>>& swap_perm) {
  const int n = basis.n, d = basis.d;
  const long long dim = basis.dim;

  // Reference content vectors (c_2 .. c_n) per sector.
  std::map<std::vector<int>, int> sector_of_content;
  for (std::size_t si = 0; si < reps.size(); ++si) {
    std::vector<int> tail(reps[si].contents[0].begin() + 1, reps[si].contents[0].end());
    sector_of_content[tail] = static_cast<int>(si);
  }

  // Weight blocks in descending lexicographic order of the letter-count
  // vector; this ordering is what defines the multiplicity index.
  std::map<std::vector<int>, std::vector<long long>, std::greater<std::vector<int>>> blocks;
  for (long long g = 0; g < dim; ++g) blocks[state_weight(g, n, d)].push_back(g);

  // Transposition index permutations (a, k) for the YJM sums.
  std::vector<std::vector<std::vector<long long>>> transp(n + 1);
  for (int k = 2; k <= n; ++k) {
    transp[k].resize(k - 1);
    for (int a = 1; a < k; ++a) {
      std::vector<int> sigma(n);
      for (int i = 0; i < n; ++i) sigma[i] = i + 1;
      std::swap(sigma[a - 1], sigma[k - 1]);
      transp[k][a - 1] = site_permutation_indices(n, d, sigma);
    }
  }

  std::vector<std::vector<Eigen::VectorXd>> sector_columns(reps.size());

  for (const auto& [weight, states] : blocks) {
    const int bs = static_cast<int>(states.size());
    std::map<long long, int> col_of;
    for (int i = 0; i < bs; ++i) col_of[states[i]] = i;

    struct Node {
      Eigen::MatrixXd v;            // block_dim x subspace_dim, orthonormal
      std::vector<int> contents;    // c_2 .. c_k so far
    };
    std::vector<Node> live;
    live.push_back({Eigen::MatrixXd::Identity(bs, bs), {}});

    for (int k = 2; k <= n; ++k) {
      // X_k restricted to this weight block.
      Eigen::MatrixXd xk = Eigen::MatrixXd::Zero(bs, bs);
      for (int a = 1; a < k; ++a) {
        const auto& tp = transp[k][a - 1];
        for (int i = 0; i < bs; ++i) xk(col_of.at(tp[states[i]]), i) += 1.0;
      }
      std::vector<Node> next;
      for (auto& node : live) {
        if (node.v.cols() == 1) {
          // One-dimensional: read off the eigenvalue directly.
          double ev = (node.v.transpose() * xk * node.v)(0, 0);
          long long c = std::llround(ev);
          if (std::abs(ev - c) > 1e-6) throw std::logic_error("non-integer YJM eigenvalue");
          node.contents.push_back(static_cast<int>(c));
          next.push_back(std::move(node));
          continue;
        }
        Eigen::MatrixXd m = node.v.transpose() * xk * node.v;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
        const Eigen::VectorXd& ev = es.eigenvalues();
        int start = 0;
        while (start < ev.size()) {
          long long c = std::llround(ev[start]);
          if (std::abs(ev[start] - c) > 1e-6)
            throw std::logic_error("non-integer YJM eigenvalue");
          int stop = start;
          while (stop < ev.size() && std::llround(ev[stop]) == c) ++stop;
          Node child;
          child.v = node.v * es.eigenvectors().middleCols(start, stop - start);
          child.contents = node.contents;
          child.contents.push_back(static_cast<int>(c));
          next.push_back(std::move(child));
          start = stop;
        }
      }
      live = std::move(next);
    }

    for (const auto& node : live) {
      auto it = sector_of_content.find(node.contents);
      if (it == sector_of_content.end()) continue;  // not a reference tableau
      for (int c = 0; c < node.v.cols(); ++c) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < bs; ++i) col[states[i]] = node.v(i, c);
        sector_columns[it->second].push_back(std::move(col));
      }
    }
  }

  for (std::size_t si = 0; si < reps.size(); ++si) {
    const SectorInfo& s = basis.sectors[si];
    if (static_cast<long long>(sector_columns[si].size()) != s.mult)
      throw std::logic_error("multiplicity count mismatch in sector " + s.lambda.to_string());
    // Modified Gram-Schmidt cleanup; columns are orthonormal up to roundoff.
    for (long long m = 0; m < s.mult; ++m) {
      Eigen::VectorXd v = sector_columns[si][m];
      for (long long p = 0; p < m; ++p) {
        const Eigen::VectorXd& u = basis.q.col(s.offset + p * s.dim);
        v -= u.dot(v) * u;
      }
      basis.q.col(s.offset + m * s.dim) = v / v.norm();
    }
  }

  fix_reference_signs(basis);
  ladder_fill(basis, reps, swap_perm);
}

// d = 2 construction by sequential angular-momentum coupling, Condon-Shortley
// convention, |0> carrying m = +1/2. Chains of intermediate spins are in
// bijection with two-row standard tableaux (up step = box in row 1).
inline void build_cg(SchurBasis& basis, const std::vector<IrrepBlockRep>& reps) {
  const int n = basis.n;

  struct Chain {
    std::vector<int> steps;           // +1 / -1 per added site after the first
    int j2 = 1;                       // doubled total spin
    std::vector<Eigen::VectorXd> vec; // per m2 = j2, j2-2, ..., -j2
  };

  std::vector<Chain> live(1);
  live[0].steps = {};
  live[0].j2 = 1;
  live[0].vec = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};

  auto append0 = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * v.size());
    for (long long i = 0; i < v.size(); ++i) w[2 * i] = v[i];
    return w;
  };
  auto append1 = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * v.size());
    for (long long i = 0; i < v.size(); ++i) w[2 * i + 1] = v[i];
    return w;
  };

  for (int site = 2; site <= n; ++site) {
    std::vector<Chain> next;
    next.reserve(2 * live.size());
    for (const auto& ch : live) {
      const int j2 = ch.j2;
      auto parent = [&](int m2) -> const Eigen::VectorXd* {
        if (m2 > j2 || m2 < -j2) return nullptr;
        return &ch.vec[(j2 - m2) / 2];
      };
      {
        Chain up;
        up.steps = ch.steps;
        up.steps.push_back(+1);
        up.j2 = j2 + 1;
        for (int m2 = up.j2; m2 >= -up.j2; m2 -= 2) {
          double cu = std::sqrt((j2 + m2 + 1.0) / (2.0 * (j2 + 1)));
          double cd = std::sqrt((j2 - m2 + 1.0) / (2.0 * (j2 + 1)));
          Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * ch.vec[0].size());
          if (const auto* p = parent(m2 - 1)) w += cu * append0(*p);
          if (const auto* p = parent(m2 + 1)) w += cd * append1(*p);
          up.vec.push_back(std::move(w));
        }
        next.push_back(std::move(up));
      }
      if (j2 >= 1) {
        Chain dn;
        dn.steps = ch.steps;
        dn.steps.push_back(-1);
        dn.j2 = j2 - 1;
        for (int m2 = dn.j2; m2 >= -dn.j2; m2 -= 2) {
          double cu = std::sqrt((j2 - m2 + 1.0) / (2.0 * (j2 + 1)));
          double cd = std::sqrt((j2 + m2 + 1.0) / (2.0 * (j2 + 1)));
          Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * ch.vec[0].size());
          if (const auto* p = parent(m2 - 1)) w -= cu * append0(*p);
          if (const auto* p = parent(m2 + 1)) w += cd * append1(*p);
          dn.vec.push_back(std::move(w));
        }
        next.push_back(std::move(dn));
      }
    }
    live = std::move(next);
  }

  // Tableau lookup per sector.
  std::vector<std::map<std::vector<int>, int>> index_of(reps.size());
  std::map<Partition, int> sector_index;
  for (std::size_t si = 0; si < reps.size(); ++si) {
    sector_index[reps[si].lambda] = static_cast<int>(si);
    for (std::size_t t = 0; t < reps[si].tableaux.size(); ++t)
      index_of[si][tableau_key(reps[si].tableaux[t], n)] = static_cast<int>(t);
  }

  for (const auto& ch : live) {
    StandardTableau t;
    t.rows.assign(2, {});
    t.rows[0].push_back(1);
    for (int k = 2; k <= n; ++k)
      t.rows[ch.steps[k - 2] > 0 ? 0 : 1].push_back(k);
    if (t.rows[1].empty()) t.rows.pop_back();
    std::vector<int> shape;
    for (const auto& row : t.rows) shape.push_back(static_cast<int>(row.size()));
    t.shape = Partition(shape);

    int si = sector_index.at(t.shape);
    int gt = index_of[si].at(detail::tableau_key(t, n));
    const SectorInfo& s = basis.sectors[si];
    // m2 descending is exactly the decreasing-weight multiplicity order.
    for (long long m = 0; m < s.mult; ++m)
      basis.q.col(s.offset + m * s.dim + gt) = ch.vec[m];
  }

  fix_reference_signs(basis);
}

}  // namespace detail

inline SchurBasis build_schur_basis(int n, int d, SchurMethod method = SchurMethod::Auto) {
  if (n < 1 || d < 1) throw std::invalid_argument("build_schur_basis: need n >= 1, d >= 1");
  long long dim = pow_ll(d, n);
  if (dim > kDenseCap)
    throw budget_error("build_schur_basis: d^n = " + std::to_string(dim) +
                       " exceeds dense cap " + std::to_string(kDenseCap));

  SchurBasis basis;
  basis.n = n;
  basis.d = d;
  basis.dim = dim;
  basis.q = Eigen::MatrixXd::Zero(dim, dim);

  std::vector<IrrepBlockRep> reps;
  long long offset = 0;
  for (const Partition& lam : enumerate_partitions(n, d)) {
    long long mult = weyl_multiplicity(lam, d);
    if (mult == 0) continue;
    IrrepBlockRep rep = build_irrep(lam);
    SectorInfo s;
    s.lambda = lam;
    s.dim = rep.dim;
    s.mult = mult;
    s.offset = offset;
    offset += s.size();
    basis.sectors.push_back(s);
    reps.push_back(std::move(rep));
  }
  if (offset != dim) throw std::logic_error("sector dimensions do not sum to d^n");

  basis.labels.resize(dim);
  for (std::size_t si = 0; si < basis.sectors.size(); ++si) {
    const SectorInfo& s = basis.sectors[si];
    for (long long m = 0; m < s.mult; ++m)
      for (long long t = 0; t < s.dim; ++t)
        basis.labels[s.offset + m * s.dim + t] =
            ColumnLabel{static_cast<int>(si), static_cast<int>(m), static_cast<int>(t)};
  }

  SchurMethod chosen = method;
  if (chosen == SchurMethod::Auto)
    chosen = (d == 2) ? SchurMethod::ClebschGordan : SchurMethod::YjmChain;
  if (chosen == SchurMethod::ClebschGordan && d != 2)
    throw std::invalid_argument("Clebsch-Gordan construction requires d = 2");

  if (n == 1) {
    basis.q = Eigen::MatrixXd::Identity(dim, dim);
    return basis;
  }

  if (chosen == SchurMethod::ClebschGordan) {
    detail::build_cg(basis, reps);
  } else {
    std::vector<std::vector<long long>> swap_perm;
    for (int j = 1; j <= n - 1; ++j)
      swap_perm.push_back(site_permutation_indices(n, d, adjacent_swap_one_line(n, j)));
    detail::build_yjm(basis, reps, swap_perm);
  }
  return basis;
}

// ---------------------------------------------------------------------------
// On-disk cache. Little-endian layout:
//   bytes 0..7   magic "SCHURQ1\0"
//   u32          format version (1)
//   u32 n, u32 d
//   u64 dim
//   dim*dim pairs of f64 (re, im), row-major   -- q is real, so im is 0
//   per column: u32 part count, i32 parts..., u32 mult_index, u32 gt_index
// ---------------------------------------------------------------------------

namespace detail {
inline constexpr char kCacheMagic[8] = {'S', 'C', 'H', 'U', 'R', 'Q', '1', '\0'};
inline constexpr std::uint32_t kCacheVersion = 1;
}  // namespace detail

inline bool save_schur_basis(const SchurBasis& basis, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return false;
  auto put = [&](const void* p, std::size_t bytes) {
    return std::fwrite(p, 1, bytes, f) == bytes;
  };
  bool ok = put(detail::kCacheMagic, 8);
  std::uint32_t v = detail::kCacheVersion, n32 = basis.n, d32 = basis.d;
  std::uint64_t dim64 = static_cast<std::uint64_t>(basis.dim);
  ok = ok && put(&v, 4) && put(&n32, 4) && put(&d32, 4) && put(&dim64, 8);
  for (long long i = 0; ok && i < basis.dim; ++i)
    for (long long j = 0; ok && j < basis.dim; ++j) {
      double re = basis.q(i, j), im = 0.0;
      ok = put(&re, 8) && put(&im, 8);
    }
  for (long long c = 0; ok && c < basis.dim; ++c) {
    const ColumnLabel& lab = basis.labels[c];
    const Partition& lam = basis.sectors[lab.sector].lambda;
    std::uint32_t np = static_cast<std::uint32_t>(lam.rows());
    ok = put(&np, 4);
    for (int p : lam.parts) {
      std::int32_t p32 = p;
      ok = ok && put(&p32, 4);
    }
    std::uint32_t mi = lab.mult_index, gi = lab.gt_index;
    ok = ok && put(&mi, 4) && put(&gi, 4);
  }
  std::fclose(f);
  return ok;
}

// Returns nothing on any mismatch or I/O problem; the caller falls back to a
// fresh build.
inline std::optional<SchurBasis> load_schur_basis(int n, int d, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return std::nullopt;
  auto fail = [&]() {
    std::fclose(f);
    return std::nullopt;
  };
  auto get = [&](void* p, std::size_t bytes) {
    return std::fread(p, 1, bytes, f) == bytes;
  };
  char magic[8];
  std::uint32_t v = 0, n32 = 0, d32 = 0;
  std::uint64_t dim64 = 0;
  if (!get(magic, 8) || std::memcmp(magic, detail::kCacheMagic, 8) != 0) return fail();
  if (!get(&v, 4) || v != detail::kCacheVersion) return fail();
  if (!get(&n32, 4) || !get(&d32, 4) || !get(&dim64, 8)) return fail();
  if (n32 != static_cast<std::uint32_t>(n) || d32 != static_cast<std::uint32_t>(d))
    return fail();

  SchurBasis basis;
  basis.n = n;
  basis.d = d;
  basis.dim = static_cast<long long>(dim64);
  if (basis.dim != pow_ll(d, n) || basis.dim > kDenseCap) return fail();
  basis.q.resize(basis.dim, basis.dim);
  for (long long i = 0; i < basis.dim; ++i)
    for (long long j = 0; j < basis.dim; ++j) {
      double re, im;
      if (!get(&re, 8) || !get(&im, 8)) return fail();
      if (std::abs(im) > 1e-12) return fail();
      basis.q(i, j) = re;
    }

  // Rebuild sector metadata independently, then check the stored index map
  // agrees with it.
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
    basis.sectors.push_back(s);
  }
  basis.labels.resize(basis.dim);
  for (std::size_t si = 0; si < basis.sectors.size(); ++si) {
    const SectorInfo& s = basis.sectors[si];
    for (long long m = 0; m < s.mult; ++m)
      for (long long t = 0; t < s.dim; ++t)
        basis.labels[s.offset + m * s.dim + t] =
            ColumnLabel{static_cast<int>(si), static_cast<int>(m), static_cast<int>(t)};
  }
  for (long long c = 0; c < basis.dim; ++c) {
    std::uint32_t np = 0;
    if (!get(&np, 4) || np > 64) return fail();
    std::vector<int> parts(np);
    for (auto& p : parts) {
      std::int32_t p32;
      if (!get(&p32, 4)) return fail();
      p = p32;
    }
    std::uint32_t mi = 0, gi = 0;
    if (!get(&mi, 4) || !get(&gi, 4)) return fail();
    const ColumnLabel& lab = basis.labels[c];
    if (basis.sectors[lab.sector].lambda.parts != parts ||
        lab.mult_index != static_cast<int>(mi) || lab.gt_index != static_cast<int>(gi))
      return fail();
  }
  std::fclose(f);
  return basis;
}

// Process-level memo; the returned basis is immutable and shared.
inline std::shared_ptr<const SchurBasis> get_schur_basis_cached(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SchurBasis>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, d);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  auto basis = std::make_shared<const SchurBasis>(build_schur_basis(n, d));
  memo[key] = basis;
  return basis;
}

}  // namespace schurand
