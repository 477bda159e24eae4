#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "schurand/linalg.hpp"
#include "schurand/schur.hpp"

namespace schurand {

// Generalized Pauli string on n qudits: per site the exponents (a, b) of the
// shift X |j> = |j+1 mod d> and clock Z |j> = w^j |j> with w = exp(2 pi i/d).
// The d^{2n} strings X^a Z^b (global phases dropped) satisfy the usual
// orthonormality (1/d^n) Tr(S'^dag S) = delta and completeness
// sum_S S M S^dag = d^n Tr(M) I.
struct PauliString {
  int n = 0;
  int d = 2;
  std::vector<std::pair<int, int>> powers;  // (x_power, z_power) per site

  static PauliString identity(int n, int d) {
    PauliString s;
    s.n = n;
    s.d = d;
    s.powers.assign(n, {0, 0});
    return s;
  }

  bool is_identity() const {
    for (const auto& [a, b] : powers)
      if (a % d != 0 || b % d != 0) return false;
    return true;
  }
};

inline Eigen::MatrixXcd pauli_single(int d, int x_power, int z_power) {
  using cd = std::complex<double>;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  const double two_pi = 6.283185307179586476925286766559;
  for (int j = 0; j < d; ++j) {
    double phase = two_pi * ((static_cast<long long>(z_power) * j) % d) / d;
    m((j + x_power) % d, j) = cd(std::cos(phase), std::sin(phase));
  }
  return m;
}

inline Eigen::MatrixXcd dense(const PauliString& s) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < s.n; ++k)
    out = kron(out, pauli_single(s.d, s.powers[k].first, s.powers[k].second));
  return out;
}

// All d^{2n} strings, identity first, in lexicographic exponent order.
inline std::vector<PauliString> enumerate_pauli_strings(int n, int d) {
  std::vector<PauliString> out;
  long long total = 1;
  for (int i = 0; i < 2 * n; ++i) {
    total *= d;
    if (total > (1 << 24)) throw std::invalid_argument("Pauli group too large to enumerate");
  }
  for (long long code = 0; code < total; ++code) {
    PauliString s = PauliString::identity(n, d);
    long long rem = code;
    for (int k = n - 1; k >= 0; --k) {
      s.powers[k].second = static_cast<int>(rem % d);
      rem /= d;
      s.powers[k].first = static_cast<int>(rem % d);
      rem /= d;
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Single-site operator X^a Z^b at site r (1-based), identity elsewhere,
// as a dense matrix on (C^d)^{x n}.
inline Eigen::MatrixXcd pauli_site_dense(int n, int d, int r, int x_power, int z_power) {
  if (r < 1 || r > n) throw std::invalid_argument("pauli site out of range");
  Eigen::MatrixXcd out(1, 1);
  out(0, 0) = 1.0;
  for (int k = 1; k <= n; ++k) {
    Eigen::MatrixXcd factor = (k == r)
                                  ? pauli_single(d, x_power, z_power)
                                  : Eigen::MatrixXcd::Identity(d, d);
    out = kron(out, factor).eval();
  }
  return out;
}

// The three Hermitian qubit Paulis at one site.
inline std::vector<Eigen::MatrixXcd> qubit_paulis_at_site(int n, int r) {
  using cd = std::complex<double>;
  std::vector<Eigen::MatrixXcd> out;
  out.push_back(pauli_site_dense(n, 2, r, 1, 0));  // X
  Eigen::MatrixXcd y = cd(0.0, 1.0) * pauli_site_dense(n, 2, r, 1, 1);  // Y = i X Z
  out.push_back(y);
  out.push_back(pauli_site_dense(n, 2, r, 0, 1));  // Z
  return out;
}

}  // namespace schurand
