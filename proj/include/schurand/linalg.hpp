#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace schurand {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Partial trace over the factors listed in trace_out (0-based positions into
// dims). Tensor index convention: factor 0 is most significant, so the flat
// index of |i_0 i_1 ... i_{m-1}> is i_0 * (d_1 ... d_{m-1}) + ... + i_{m-1},
// matching kron(A_0, A_1, ..., A_{m-1}).
inline Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho,
                                      const std::vector<int>& dims,
                                      const std::vector<int>& trace_out) {
  const int m = static_cast<int>(dims.size());
  long long total = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("partial_trace: bad factor dimension");
    total *= d;
  }
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: dims do not match matrix size");

  std::vector<bool> traced(m, false);
  for (int t : trace_out) {
    if (t < 0 || t >= m) throw std::invalid_argument("partial_trace: factor out of range");
    if (traced[t]) throw std::invalid_argument("partial_trace: repeated factor");
    traced[t] = true;
  }

  std::vector<long long> stride(m, 1);
  for (int i = m - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::vector<int> keep, gone;
  for (int i = 0; i < m; ++i) (traced[i] ? gone : keep).push_back(i);

  long long dim_keep = 1, dim_gone = 1;
  for (int i : keep) dim_keep *= dims[i];
  for (int i : gone) dim_gone *= dims[i];

  // Flat offset of a combined (keep-index, gone-index) pair.
  auto offset = [&](long long ik, long long ig) {
    long long off = 0;
    for (int p = static_cast<int>(keep.size()) - 1; p >= 0; --p) {
      off += (ik % dims[keep[p]]) * stride[keep[p]];
      ik /= dims[keep[p]];
    }
    for (int p = static_cast<int>(gone.size()) - 1; p >= 0; --p) {
      off += (ig % dims[gone[p]]) * stride[gone[p]];
      ig /= dims[gone[p]];
    }
    return off;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_keep, dim_keep);
  for (long long r = 0; r < dim_keep; ++r)
    for (long long c = 0; c < dim_keep; ++c) {
      std::complex<double> s = 0.0;
      for (long long g = 0; g < dim_gone; ++g) s += rho(offset(r, g), offset(c, g));
      out(r, c) = s;
    }
  return out;
}

// Convenience for an n-site chain of equal local dimension d.
inline Eigen::MatrixXcd partial_trace_sites(const Eigen::MatrixXcd& rho, int d,
                                            int n, const std::vector<int>& trace_out) {
  return partial_trace(rho, std::vector<int>(n, d), trace_out);
}

inline Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& a) {
  return 0.5 * (a + a.adjoint());
}

// Trace norm via singular values.
inline double trace_norm(const Eigen::MatrixXcd& a) {
  return a.jacobiSvd().singularValues().sum();
}

// 0.5 * || rho - sigma ||_1 for Hermitian inputs, via the eigenvalues of the
// difference (cheaper and more accurate than an SVD here).
inline double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(rho - sigma),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Uhlmann fidelity F(rho, sigma) = Tr sqrt( sqrt(rho) sigma sqrt(rho) ),
// clamped to [0, 1]. Inputs are treated as (numerically) PSD with unit trace;
// tiny negative eigenvalues from roundoff are clipped.
inline double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols())
    throw std::invalid_argument("fidelity: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_rho(hermitize(rho));
  Eigen::VectorXd ev = es_rho.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXcd sqrt_rho = es_rho.eigenvectors() *
                              ev.cwiseSqrt().asDiagonal() *
                              es_rho.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_mid(
      hermitize(sqrt_rho * sigma * sqrt_rho));
  double f = es_mid.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  if (f < 0.0) f = 0.0;
  if (f > 1.0) f = 1.0;
  return f;
}

// Counters for the Fuchs-van de Graaf audit below. Every purified distance
// computed anywhere in the library is cross-checked against the trace
// distance of the same pair; the acceptance suite asserts at the end that the
// audit ran and never tripped.
struct SandwichAudit {
  static std::atomic<long long>& checks() {
    static std::atomic<long long> v{0};
    return v;
  }
  static std::atomic<long long>& violations() {
    static std::atomic<long long> v{0};
    return v;
  }
};

// Purified distance P = sqrt(1 - F^2). Always audits the Fuchs-van de Graaf
// sandwich T <= P <= sqrt(2T) (T the trace distance) and counts the outcome
// in SandwichAudit. The tolerance absorbs eigensolver roundoff near F = 1,
// where P picks up O(sqrt(eps)) noise; genuine logic errors violate the
// sandwich by O(1).
inline double purified_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  double f = fidelity(rho, sigma);
  double p = std::sqrt(std::max(0.0, 1.0 - f * f));
  double t = trace_distance(rho, sigma);
  SandwichAudit::checks().fetch_add(1, std::memory_order_relaxed);
  const double tol = 1e-6;
  if (!(t <= p + tol) || !(p <= std::sqrt(2.0 * t) + tol))
    SandwichAudit::violations().fetch_add(1, std::memory_order_relaxed);
  return p;
}

// Throws if rho is not a density matrix to within tol.
inline void validate_state(const Eigen::MatrixXcd& rho, double tol = 1e-9) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("state is not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("state is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw std::invalid_argument("state trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(rho), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("state is not positive semidefinite");
}

}  // namespace schurand
