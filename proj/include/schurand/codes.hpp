#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "schurand/fit.hpp"
#include "schurand/haar.hpp"
#include "schurand/linalg.hpp"
#include "schurand/pauli.hpp"
#include "schurand/rng.hpp"
#include "schurand/schur.hpp"
#include "schurand/util.hpp"

namespace schurand {

// Choice of the SU(d)-symmetric state on the non-logical input qudits.
// SingletProduct is a pure tensor product of d-qudit totally antisymmetric
// singlets and needs d | (n-k); MaxMixed works for any size. Auto picks the
// pure state whenever it exists.
enum class PsiSpec { Auto, SingletProduct, MaxMixed };

struct CodeInstance {
  int n = 0;            // physical qudits
  int k = 0;            // logical qudits, carried by the first k sites
  int d = 2;            // local dimension
  int erased_site = 0;  // 1-based; 0 means the default (last site)
  PsiSpec psi = PsiSpec::Auto;

  int resolved_erased_site() const { return erased_site == 0 ? n : erased_site; }
  void validate() const {
    if (d < 2) throw std::invalid_argument("code: need d >= 2");
    if (k < 1 || k >= n) throw std::invalid_argument("code: need 1 <= k < n");
    int e = resolved_erased_site();
    if (e < 1 || e > n) throw std::invalid_argument("code: erased site out of range");
  }
};

// Psi as a factor matrix: density = factors * factors^dag, so a pure state is
// a single column and the maximally mixed state is I/sqrt(d^m).
struct PsiState {
  Eigen::MatrixXcd factors;
  bool pure = false;
  std::string name;
  Eigen::MatrixXcd density() const { return factors * factors.adjoint(); }
};

inline PsiState make_psi(int m, int d, PsiSpec spec) {
  if (m < 1) throw std::invalid_argument("make_psi: need at least one qudit");
  if (spec == PsiSpec::Auto)
    spec = (m % d == 0) ? PsiSpec::SingletProduct : PsiSpec::MaxMixed;
  PsiState psi;
  if (spec == PsiSpec::MaxMixed) {
    long long dim = pow_ll(d, m);
    psi.factors = Eigen::MatrixXcd::Identity(dim, dim) /
                  std::sqrt(static_cast<double>(dim));
    psi.pure = false;
    psi.name = "maxmixed";
    return psi;
  }
  if (m % d != 0)
    throw std::invalid_argument("make_psi: singlet product needs d | (n-k)");
  // One d-qudit singlet: (1/sqrt(d!)) sum_sigma sign(sigma) |sigma(0..d-1)>.
  long long bd = pow_ll(d, d);
  Eigen::VectorXcd block = Eigen::VectorXcd::Zero(bd);
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  const double norm =
      1.0 / std::sqrt(static_cast<double>(detail::checked_factorial(d)));
  do {
    int inv = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (p[i] > p[j]) ++inv;
    long long idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * d + p[i];
    block(idx) = ((inv % 2) ? -norm : norm);
  } while (std::next_permutation(p.begin(), p.end()));
  Eigen::VectorXcd vec = Eigen::VectorXcd::Ones(1);
  for (int b = 0; b < m / d; ++b) {
    Eigen::VectorXcd next(vec.size() * bd);
    for (long long i = 0; i < vec.size(); ++i)
      next.segment(i * bd, bd) = vec(i) * block;
    vec = std::move(next);
  }
  psi.factors = vec;
  psi.pure = true;
  psi.name = "singlet";
  return psi;
}

// State on the reference R (d^k) joined with the erased qudit (d); the first
// tensor factor is R.
struct JointState {
  Eigen::MatrixXcd rho;
  std::string provenance;
};

// Exact symmetric-Haar average of the encode-and-erase output:
//   (1/n) sum_{a=1}^k (1/d^{k-1}) I_{R minus a} (x) Bell_{a, erased}
//   + ((n-k)/n) I / d^{k+1}.
// Independent of which SU(d)-symmetric psi fills the non-logical qudits and
// of the erased site; the dimension is d^{k+1} regardless of n, so sweeps run
// to arbitrary n. Single-qudit erasure only.
inline JointState rho_avg_closed_form(int n, int k, int d) {
  if (d < 2 || k < 1 || k >= n)
    throw std::invalid_argument("rho_avg_closed_form: need d >= 2, 1 <= k < n");
  const long long dim_r = pow_ll(d, k);
  const long long dim = dim_r * d;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);

  const double bell_weight =
      (1.0 / static_cast<double>(n)) / static_cast<double>(pow_ll(d, k - 1));
  for (int a = 1; a <= k; ++a) {
    // Insert the Bell digit at position a-1 among the k reference digits.
    const long long lo = pow_ll(d, k - a);  // digits right of site a
    const long long hi = dim_r / (lo * d);  // digits left of site a
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (long long h = 0; h < hi; ++h)
          for (long long l = 0; l < lo; ++l) {
            long long row_r = (h * d + i) * lo + l;
            long long col_r = (h * d + j) * lo + l;
            rho(row_r * d + i, col_r * d + j) += bell_weight / d;
          }
  }
  rho += (static_cast<double>(n - k) / n) / static_cast<double>(pow_ll(d, k + 1)) *
         Eigen::MatrixXcd::Identity(dim, dim);
  return {rho, "avg"};
}

// One encode-and-erase pass: the logical half of k Bell pairs enters the
// first k sites, psi fills the rest, u scrambles, one site is erased (traced
// out together with nothing else kept), and everything except R and the
// erased site is discarded.
inline JointState encode_and_erase(const CodeInstance& code, const SymmetricUnitary& u,
                                   const SchurBasis& basis) {
  code.validate();
  if (basis.n != code.n || basis.d != code.d)
    throw std::invalid_argument("encode_and_erase: basis does not match code");
  const int n = code.n, k = code.k, d = code.d;
  const int e = code.resolved_erased_site();
  const long long dim_r = pow_ll(d, k);
  const long long dim_rest = pow_ll(d, n - k);
  const long long dim_b = pow_ll(d, n - 1);  // everything but the erased site
  const long long stride_e = pow_ll(d, n - e);

  PsiState psi = make_psi(n - k, d, code.psi);
  Eigen::MatrixXcd u_dense = u.dense_computational(basis);
  const long long r = psi.factors.cols();

  // Column (I, alpha) of the evolved joint pure-part: u * (|I>_A (x) f_alpha),
  // reshaped below into a (kept sites) x (erased digit) slice matrix.
  auto slice_of = [&](long long i_log, long long alpha) {
    Eigen::VectorXcd col =
        u_dense.middleCols(i_log * dim_rest, dim_rest) * psi.factors.col(alpha);
    Eigen::MatrixXcd s(dim_b, d);
    for (long long b = 0; b < dim_b; ++b) {
      long long hi = b / stride_e, lo = b % stride_e;
      for (int i = 0; i < d; ++i) s(b, i) = col((hi * d + i) * stride_e + lo);
    }
    return s;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_r * d, dim_r * d);
  std::vector<Eigen::MatrixXcd> slices(static_cast<std::size_t>(r));
  for (long long i_log = 0; i_log < dim_r; ++i_log) {
    // Reuse slices of the same alpha across the J loop one I at a time.
    for (long long alpha = 0; alpha < r; ++alpha)
      slices[static_cast<std::size_t>(alpha)] = slice_of(i_log, alpha);
    for (long long j_log = 0; j_log <= i_log; ++j_log) {
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(d, d);
      for (long long alpha = 0; alpha < r; ++alpha) {
        Eigen::MatrixXcd sj =
            (j_log == i_log) ? slices[static_cast<std::size_t>(alpha)]
                             : slice_of(j_log, alpha);
        block += (sj.adjoint() * slices[static_cast<std::size_t>(alpha)]).transpose();
      }
      block /= static_cast<double>(dim_r);
      rho.block(i_log * d, j_log * d, d, d) = block;
      if (j_log != i_log)
        rho.block(j_log * d, i_log * d, d, d) = block.adjoint();
    }
  }
  return {rho, "sampled"};
}

struct ChoiBound {
  double exact = 0.0;        // purified distance from rho_avg to I/d^{k+1}
  double paper_bound = 0.0;  // the closed-form square-root upper bound
  double approx = 0.0;       // asymptotic form k sqrt(d^2-1) / (2n)
};

inline ChoiBound choi_error_bound(int n, int k, int d) {
  ChoiBound out;
  JointState avg = rho_avg_closed_form(n, k, d);
  const long long dim = avg.rho.rows();
  Eigen::MatrixXcd decoupled =
      Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  out.exact = purified_distance(avg.rho, decoupled);
  const double dd = static_cast<double>(d) * d;
  const double frac = static_cast<double>(n - k) / n;
  const double inner = std::sqrt(static_cast<double>(k) / n + frac / dd) +
                       std::sqrt(frac / dd) * (dd - 1.0);
  out.paper_bound = std::sqrt(std::max(0.0, 1.0 - inner * inner / dd));
  out.approx = k * std::sqrt(dd - 1.0) / (2.0 * n);
  return out;
}

struct Figure2Row {
  int n = 0;
  double exact = 0.0;
  double approx = 0.0;
};

struct Figure2Sweep {
  int k = 0;
  int d = 0;
  std::vector<Figure2Row> rows;
  FitResult fit;  // log(exact) vs log(n)
};

inline Figure2Sweep figure2_sweep(int k, const std::vector<int>& n_list, int d) {
  Figure2Sweep sweep;
  sweep.k = k;
  sweep.d = d;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    ChoiBound b = choi_error_bound(n, k, d);
    sweep.rows.push_back({n, b.exact, b.approx});
    xs.push_back(static_cast<double>(n));
    ys.push_back(b.exact);
  }
  sweep.fit = power_law_fit(xs, ys);
  return sweep;
}

namespace detail_codes {

// Entrywise accumulator for matrix-valued Monte Carlo: tracks the mean and a
// Frobenius-aggregated standard error of the mean.
struct MatrixAccumulator {
  Eigen::MatrixXcd sum;
  Eigen::MatrixXd sumsq;  // |entry|^2
  long long n = 0;
  void init(long long rows, long long cols) {
    sum = Eigen::MatrixXcd::Zero(rows, cols);
    sumsq = Eigen::MatrixXd::Zero(rows, cols);
  }
  void add(const Eigen::MatrixXcd& x) {
    sum += x;
    sumsq += x.cwiseAbs2();
    ++n;
  }
  void merge(const MatrixAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) init(o.sum.rows(), o.sum.cols());
    sum += o.sum;
    sumsq += o.sumsq;
    n += o.n;
  }
  Eigen::MatrixXcd mean() const { return sum / static_cast<double>(n); }
  // sqrt(sum of entrywise variances of the mean).
  double stderr_frobenius() const {
    if (n < 2) return 0.0;
    double total = 0.0;
    for (long long i = 0; i < sum.rows(); ++i)
      for (long long j = 0; j < sum.cols(); ++j) {
        double var = (sumsq(i, j) - std::norm(sum(i, j)) / static_cast<double>(n)) /
                     static_cast<double>(n - 1);
        total += std::max(var, 0.0) / static_cast<double>(n);
      }
    return std::sqrt(total);
  }
};

template <typename Fn>
void for_each_sample(const CodeInstance& code, const SchurBasis& basis,
                     long long samples, unsigned long long seed, int workers,
                     const SymmetricUnitary* fixed_u, Fn&& body) {
  SectorLayout layout = layout_of(basis);
  run_partitioned(samples, std::max(workers, 1),
                  [&](int wkr, long long begin, long long end) {
                    RngStream rng(seed, static_cast<unsigned long long>(wkr));
                    for (long long i = begin; i < end; ++i) {
                      SymmetricUnitary u =
                          fixed_u ? *fixed_u : sample(layout, rng);
                      body(wkr, encode_and_erase(code, u, basis));
                    }
                  });
}

}  // namespace detail_codes

struct SampledRhoAvg {
  Eigen::MatrixXcd mean;
  double stderr_frobenius = 0.0;  // aggregated entrywise SE of the mean
  long long n_samples = 0;
};

// Monte Carlo estimate of the averaged output state.
inline SampledRhoAvg sampled_rho_avg(const CodeInstance& code, const SchurBasis& basis,
                                     long long samples, unsigned long long seed,
                                     int workers = 1) {
  if (samples < 2) throw std::invalid_argument("sampled_rho_avg: need >= 2 samples");
  std::vector<detail_codes::MatrixAccumulator> parts(std::max(workers, 1));
  const long long dim = pow_ll(code.d, code.k + 1);
  for (auto& p : parts) p.init(dim, dim);
  detail_codes::for_each_sample(code, basis, samples, seed, workers, nullptr,
                                [&](int wkr, const JointState& js) {
                                  parts[wkr].add(js.rho);
                                });
  detail_codes::MatrixAccumulator acc;
  for (const auto& p : parts) acc.merge(p);
  return {acc.mean(), acc.stderr_frobenius(), samples};
}

struct ChoiSampleStats {
  MeanStderr direct;       // P(rho_U, I/d^{k+1}) per draw
  MeanStderr fluctuation;  // P(rho_U, rho_avg) per draw
  double avg_term = 0.0;   // P(rho_avg, I/d^{k+1}), deterministic
  long long n_samples = 0;
};

// Per-draw Choi-error statistics with the decoupled target fixed to the
// maximally mixed product (zeta = I/d on the erased side). The triangle
// split bounds the direct distance by fluctuation + avg_term.
inline ChoiSampleStats sampled_choi_error(const CodeInstance& code,
                                          const SchurBasis& basis, long long samples,
                                          unsigned long long seed, int workers = 1,
                                          const SymmetricUnitary* fixed_u = nullptr) {
  if (samples < 1) throw std::invalid_argument("sampled_choi_error: need >= 1 sample");
  JointState avg = rho_avg_closed_form(code.n, code.k, code.d);
  const long long dim = avg.rho.rows();
  Eigen::MatrixXcd decoupled =
      Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);

  std::vector<Accumulator> direct(std::max(workers, 1));
  std::vector<Accumulator> fluct(std::max(workers, 1));
  detail_codes::for_each_sample(
      code, basis, samples, seed, workers, fixed_u,
      [&](int wkr, const JointState& js) {
        direct[wkr].add(purified_distance(js.rho, decoupled));
        fluct[wkr].add(purified_distance(js.rho, avg.rho));
      });
  Accumulator da, fa;
  for (int w = 0; w < static_cast<int>(direct.size()); ++w) {
    da.merge(direct[w]);
    fa.merge(fluct[w]);
  }
  ChoiSampleStats out;
  out.direct = da.result();
  out.fluctuation = fa.result();
  out.avg_term = purified_distance(avg.rho, decoupled);
  out.n_samples = samples;
  return out;
}

struct PageDeviation {
  MeanStderr deviation;        // E || rho_U - rho_avg ||_1
  double second_moment = 0.0;  // E Tr rho_U^2 - Tr rho_avg^2 (>= 0)
  long long n_samples = 0;
};

inline PageDeviation page_deviation(const CodeInstance& code, const SchurBasis& basis,
                                    long long samples, unsigned long long seed,
                                    int workers = 1,
                                    const SymmetricUnitary* fixed_u = nullptr) {
  if (samples < 1) throw std::invalid_argument("page_deviation: need >= 1 sample");
  JointState avg = rho_avg_closed_form(code.n, code.k, code.d);
  std::vector<Accumulator> dev(std::max(workers, 1));
  std::vector<Accumulator> purity(std::max(workers, 1));
  detail_codes::for_each_sample(
      code, basis, samples, seed, workers, fixed_u,
      [&](int wkr, const JointState& js) {
        dev[wkr].add(trace_norm(js.rho - avg.rho));
        purity[wkr].add((js.rho * js.rho).trace().real());
      });
  Accumulator da, pa;
  for (int w = 0; w < static_cast<int>(dev.size()); ++w) {
    da.merge(dev[w]);
    pa.merge(purity[w]);
  }
  PageDeviation out;
  out.deviation = da.result();
  out.second_moment = pa.result().mean - (avg.rho * avg.rho).trace().real();
  out.n_samples = samples;
  return out;
}

struct Renyi2Result {
  double bound = 0.0;  // lower bound on the Renyi-2 mutual information
  double stderr_ = 0.0;
  long long n_samples = 0;  // 0 for exact
};

namespace detail_codes {

inline Eigen::MatrixXcd embed_left(const Eigen::MatrixXcd& op, long long right_dim) {
  return kron(op, Eigen::MatrixXcd::Identity(right_dim, right_dim));
}

}  // namespace detail_codes

// Renyi-2 mutual-information lower bound between the reference and Bob's
// first t physical sites:
//   bound = n + 2k + 2t - log_d sum_{P_A, P_B} E Tr(P~_A^dag P_B^dag P~_A P_B)
// with P~_A = U (P_A (x) I) U^dag, P_A over the d^{2k} Paulis on the logical
// sites, P_B over the d^{2t} Paulis on Bob's sites. t = 0 gives 0; t = n
// gives 2k (full recovery).
inline Renyi2Result renyi2_mi_bound(int n, int k, int t, int d, bool exact,
                                    long long samples = 0, unsigned long long seed = 0,
                                    int workers = 1) {
  if (d < 2 || k < 1 || k >= n || t < 0 || t > n)
    throw std::invalid_argument("renyi2_mi_bound: bad (n, k, t, d)");
  auto basis = get_schur_basis_cached(n, d);
  SectorLayout layout = layout_of(*basis);
  const long long dim = layout.dim;

  std::vector<Eigen::MatrixXcd> paulis_a;
  for (const PauliString& p : enumerate_pauli_strings(k, d))
    paulis_a.push_back(detail_codes::embed_left(dense(p), pow_ll(d, n - k)));

  Renyi2Result out;
  if (exact) {
    std::vector<Eigen::MatrixXcd> pa_schur;
    for (const Eigen::MatrixXcd& p : paulis_a) pa_schur.push_back(to_schur(p, *basis));
    double total = 0.0;
    for (const PauliString& pb : enumerate_pauli_strings(t, d)) {
      Eigen::MatrixXcd pbe = detail_codes::embed_left(dense(pb), pow_ll(d, n - t));
      Eigen::MatrixXcd pb_schur = to_schur(pbe, *basis);
      Eigen::MatrixXcd pb_dag = pb_schur.adjoint();
      for (const Eigen::MatrixXcd& pa : pa_schur) {
        cplx v = second_moment_trace(pa.adjoint(), pb_dag, pa, pb_schur, layout);
        total += v.real();
      }
    }
    out.bound = n + 2 * k + 2 * t -
                std::log(total) / std::log(static_cast<double>(d));
    return out;
  }

  if (samples < 2) throw std::invalid_argument("renyi2_mi_bound: need >= 2 samples");
  // MC path: the P_B sum collapses to d^t I_B (x) Tr_B, so each draw costs
  // one conjugation per P_A.
  const long long dim_b = pow_ll(d, t);
  const long long dim_rest = dim / dim_b;
  const double dt = static_cast<double>(dim_b);
  std::vector<Accumulator> parts(std::max(workers, 1));
  run_partitioned(samples, std::max(workers, 1),
                  [&](int wkr, long long begin, long long end) {
                    RngStream rng(seed, static_cast<unsigned long long>(wkr));
                    std::vector<int> bob_sites(t);
                    for (int s = 0; s < t; ++s) bob_sites[s] = s;
                    for (long long i = begin; i < end; ++i) {
                      Eigen::MatrixXcd u =
                          sample(layout, rng).dense_computational(*basis);
                      double inner = 0.0;
                      for (const Eigen::MatrixXcd& pa : paulis_a) {
                        Eigen::MatrixXcd pt = u * pa * u.adjoint();
                        Eigen::MatrixXcd red =
                            partial_trace_sites(pt, d, n, bob_sites);
                        cplx tr = 0.0;
                        for (long long b = 0; b < dim_b; ++b)
                          tr += (pt.block(b * dim_rest, b * dim_rest, dim_rest,
                                          dim_rest)
                                     .adjoint() *
                                 red)
                                    .trace();
                        inner += dt * tr.real();
                      }
                      parts[wkr].add(inner);
                    }
                  });
  Accumulator acc;
  for (const auto& p : parts) acc.merge(p);
  MeanStderr ms = acc.result();
  out.bound = n + 2 * k + 2 * t - std::log(ms.mean) / std::log(static_cast<double>(d));
  out.stderr_ = ms.stderr_ / (ms.mean * std::log(static_cast<double>(d)));
  out.n_samples = samples;
  return out;
}

}  // namespace schurand
