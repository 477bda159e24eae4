#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "schurand/partition.hpp"

namespace schurand {

// A permutation word: sequence of adjacent transpositions (j, j+1), each
// stored as the 1-based index j. Words act left to right as operators:
// word {a, b} means the product S_a * S_b applied as matrices in that order.
using Word = std::vector<int>;

// Word for the transposition (a, b), 1-based, a < b:
// (a,b) = s_a s_{a+1} ... s_{b-2} s_{b-1} s_{b-2} ... s_{a+1} s_a.
inline Word transposition_word(int a, int b) {
  if (a == b) return {};
  if (a > b) std::swap(a, b);
  Word w;
  for (int j = a; j <= b - 1; ++j) w.push_back(j);
  for (int j = b - 2; j >= a; --j) w.push_back(j);
  return w;
}

// Reduced word for an arbitrary permutation given in one-line notation
// (perm[i] = image of i+1, entries 1..n), via bubble sort.
inline Word word_from_one_line(std::vector<int> perm) {
  Word w;
  int n = static_cast<int>(perm.size());
  for (int pass = 0; pass < n; ++pass)
    for (int i = 0; i + 1 < n; ++i)
      if (perm[i] > perm[i + 1]) {
        std::swap(perm[i], perm[i + 1]);
        w.push_back(i + 1);
      }
  return w;
}

// Cycle type of a permutation in one-line notation.
inline Partition cycle_type_of(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::vector<int> lens;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j] - 1;
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end(), std::greater<int>());
  return Partition(lens);
}

// Young orthogonal form data for one sector: the d_lambda x d_lambda real
// orthogonal generator matrices pi_lambda((j, j+1)) in the Gelfand-Tsetlin
// basis (standard tableaux in last-letter order).
struct IrrepBlockRep {
  Partition lambda;
  int n = 0;
  long long dim = 0;
  std::vector<StandardTableau> tableaux;
  std::vector<Eigen::MatrixXd> gens;          // gens[j-1] = pi((j, j+1))
  std::vector<std::vector<int>> contents;     // contents[t][k-1] = content of box k in tableau t

  const Eigen::MatrixXd& gen(int j) const {
    if (j < 1 || j > n - 1) throw std::invalid_argument("generator index out of range");
    return gens[j - 1];
  }
};

namespace detail {

// Encodes a tableau as the vector of positions of 1..n for map lookup.
inline std::vector<int> tableau_key(const StandardTableau& t, int n) {
  std::vector<int> key;
  key.reserve(2 * n);
  for (int k = 1; k <= n; ++k) {
    auto [r, c] = t.position_of(k);
    key.push_back(r);
    key.push_back(c);
  }
  return key;
}

}  // namespace detail

// Builds the Young orthogonal form for sector lambda. Diagonal entries are
// 1/r(T) with the signed axial distance r = content(j+1) - content(j); the
// off-diagonal coupling to the tableau with j and j+1 swapped is
// sqrt(1 - 1/r^2), taken positive.
inline IrrepBlockRep build_irrep(const Partition& lam) {
  IrrepBlockRep rep;
  rep.lambda = lam;
  rep.n = lam.n();
  rep.tableaux = enumerate_syt(lam);
  rep.dim = static_cast<long long>(rep.tableaux.size());
  const int n = rep.n;
  const int dim = static_cast<int>(rep.dim);

  rep.contents.assign(dim, std::vector<int>(n));
  std::map<std::vector<int>, int> index_of;
  for (int t = 0; t < dim; ++t) {
    for (int k = 1; k <= n; ++k) rep.contents[t][k - 1] = rep.tableaux[t].content_of(k);
    index_of[detail::tableau_key(rep.tableaux[t], n)] = t;
  }

  rep.gens.reserve(n - 1);
  for (int j = 1; j <= n - 1; ++j) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    for (int t = 0; t < dim; ++t) {
      int r = rep.contents[t][j] - rep.contents[t][j - 1];
      g(t, t) = 1.0 / r;
      if (r == 1 || r == -1) continue;  // j, j+1 share a row or column
      // Partner tableau: swap entries j and j+1.
      StandardTableau swapped = rep.tableaux[t];
      auto [rj, cj] = swapped.position_of(j);
      auto [rj1, cj1] = swapped.position_of(j + 1);
      swapped.rows[rj][cj] = j + 1;
      swapped.rows[rj1][cj1] = j;
      auto it = index_of.find(detail::tableau_key(swapped, n));
      if (it == index_of.end()) throw std::logic_error("YOF partner tableau missing");
      g(t, it->second) = std::sqrt(1.0 - 1.0 / (static_cast<double>(r) * r));
    }
    rep.gens.push_back(std::move(g));
  }
  return rep;
}

// pi_lambda((j, j+1)).
inline Eigen::MatrixXd yof_generator(const Partition& lam, int j) {
  IrrepBlockRep rep = build_irrep(lam);
  return rep.gen(j);
}

// YJM element X_k = (1,k) + ... + (k-1,k): diagonal in the GT basis with the
// content of box k as eigenvalue. X_1 = 0 (empty sum).
inline Eigen::MatrixXd yjm_matrix(const IrrepBlockRep& rep, int k) {
  if (k < 1 || k > rep.n) throw std::invalid_argument("YJM index out of range");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rep.dim, rep.dim);
  for (int t = 0; t < rep.dim; ++t) x(t, t) = rep.contents[t][k - 1];
  return x;
}

inline Eigen::MatrixXd yjm_matrix(const Partition& lam, int k) {
  return yjm_matrix(build_irrep(lam), k);
}

// Ordered product of generator matrices for a word.
inline Eigen::MatrixXd permutation_block(const IrrepBlockRep& rep, const Word& word) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(rep.dim, rep.dim);
  for (int j : word) m = m * rep.gen(j);
  return m;
}

inline Eigen::MatrixXd permutation_block(const Partition& lam, const Word& word) {
  return permutation_block(build_irrep(lam), word);
}

// Exchange observable block: (d * pi((r, r+1)) - I) / sqrt(d^2 - 1).
// This is the sector image of the conserved 2-local quantity
// (1/sqrt(d^2-1)) * sum over non-identity Paulis P of P (x) P^dag.
inline Eigen::MatrixXd exchange_block(const IrrepBlockRep& rep, int r, int d) {
  if (r < 1 || r > rep.n - 1) throw std::invalid_argument("exchange site out of range");
  double norm = std::sqrt(static_cast<double>(d) * d - 1.0);
  return (d * rep.gen(r) - Eigen::MatrixXd::Identity(rep.dim, rep.dim)) / norm;
}

inline Eigen::MatrixXd exchange_block(const Partition& lam, int r, int d) {
  return exchange_block(build_irrep(lam), r, d);
}

// Linear combination of permutation words plus a multiple of the identity.
struct ObservableExpansion {
  struct Term {
    std::complex<double> coeff;
    Word word;
  };
  std::vector<Term> terms;
  std::complex<double> constant{0.0, 0.0};

  Eigen::MatrixXcd block(const IrrepBlockRep& rep) const {
    Eigen::MatrixXcd m =
        constant * Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    for (const auto& term : terms)
      m += term.coeff * permutation_block(rep, term.word).cast<std::complex<double>>();
    return m;
  }
};

}  // namespace schurand
