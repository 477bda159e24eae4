#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "schurand/fit.hpp"
#include "schurand/haar.hpp"
#include "schurand/irrep.hpp"
#include "schurand/partition.hpp"
#include "schurand/pauli.hpp"
#include "schurand/rng.hpp"
#include "schurand/schur.hpp"
#include "schurand/util.hpp"

namespace schurand {

enum class OtocMode { Sym, Pauli };

inline std::string otoc_mode_name(OtocMode m) {
  return m == OtocMode::Sym ? "sym" : "pauli";
}

inline OtocMode parse_otoc_mode(const std::string& s) {
  if (s == "sym") return OtocMode::Sym;
  if (s == "pauli") return OtocMode::Pauli;
  throw std::invalid_argument("unknown otoc mode: " + s);
}

// Late-time OTOC residual F = (1/d^n) E[Tr(W~ V W~ V)], W~ = U W U^dag.
// stderr_ and n_samples are zero on exact paths.
struct OtocResult {
  int n = 0;
  int d = 0;
  std::string mode;
  int r = 0;
  double F = 0.0;
  double stderr_ = 0.0;
  long long n_samples = 0;
  unsigned long long seed = 0;
};

// Probe site default: mid-chain, far from W's support on (1,2).
inline int default_probe_site(int n) { return n / 2; }

namespace detail_otoc {

inline void check_sym_sites(int n, int r) {
  if (n < 2) throw std::invalid_argument("otoc: need n >= 2");
  if (r < 1 || r > n - 1)
    throw std::invalid_argument("otoc: exchange probe needs 1 <= r <= n-1");
}

}  // namespace detail_otoc

// Exchange observable on sites (r, r+1) in the computational basis:
// (d * SWAP_{r,r+1} - I) / sqrt(d^2 - 1). Dense, so capped at d^n <= 4096.
inline Eigen::MatrixXd exchange_dense(int n, int d, int r) {
  detail_otoc::check_sym_sites(n, r);
  Eigen::MatrixXd swap =
      permutation_matrix(site_permutation_indices(n, d, adjacent_swap_one_line(n, r)));
  const double scale = 1.0 / std::sqrt(static_cast<double>(d) * d - 1.0);
  return scale * (static_cast<double>(d) * swap -
                  Eigen::MatrixXd::Identity(swap.rows(), swap.cols()));
}

// The same observable sector by sector: (d * pi_lambda((r,r+1)) - I)/sqrt(d^2-1),
// one block per layout sector. No d^n-dimensional object is formed.
inline std::vector<Eigen::MatrixXcd> exchange_sector_blocks(const SectorLayout& layout,
                                                            int r) {
  detail_otoc::check_sym_sites(layout.n, r);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(layout.sectors.size());
  for (const SectorInfo& s : layout.sectors)
    blocks.push_back(exchange_block(s.lambda, r, layout.d).cast<cplx>());
  return blocks;
}

// Exact residual for the symmetric exchange probe. Everything reduces to
// class functions: with tau a transposition,
//   Tr W_lambda   = (d chi_lambda(tau) - d_lambda) / sqrt(d^2-1)
//   Tr W_lambda^2 = ((d^2+1) d_lambda - 2 d chi_lambda(tau)) / (d^2-1)
// and the probe V_r has the same traces (adjacent transpositions are
// conjugate), so no irrep matrices are needed and n ~ 16 is easy.
inline OtocResult otoc_symmetric_exact(int n, int d, int r) {
  detail_otoc::check_sym_sites(n, r);
  if (d < 2) throw std::invalid_argument("otoc: need d >= 2");

  std::vector<int> tau(n, 1);
  tau[0] = 2;
  tau.resize(n - 1);  // cycle type (2, 1^{n-2})
  Partition tau_type(tau);

  const double sq = std::sqrt(static_cast<double>(d) * d - 1.0);
  double total = 0.0;
  for (const Partition& lam : enumerate_partitions(n, d)) {
    long long mult = weyl_multiplicity(lam, d);
    if (mult == 0) continue;
    const double dl = static_cast<double>(hook_dimension(lam));
    const double chi = static_cast<double>(character(lam, tau_type));
    const double trw = (d * chi - dl) / sq;
    const double trw2 = ((static_cast<double>(d) * d + 1.0) * dl - 2.0 * d * chi) /
                        (static_cast<double>(d) * d - 1.0);
    double e;
    if (dl == 1.0) {
      e = trw * trw * trw * trw;
    } else {
      const double d2m1 = dl * dl - 1.0;
      e = 2.0 * trw * trw * trw2 / d2m1 -
          (trw2 * trw2 + trw * trw * trw * trw) / (dl * d2m1);
    }
    total += static_cast<double>(mult) * e;
  }

  OtocResult res;
  res.n = n;
  res.d = d;
  res.mode = "sym";
  res.r = r;
  res.F = total / static_cast<double>(pow_ll(d, n));
  return res;
}

// Matrix-level twin of otoc_symmetric_exact: feeds the actual irrep blocks
// of W (on (1,2)) and V_r through the quartic Weingarten formula. Used as a
// cross-check; requires building irrep matrices, so keep n modest.
inline OtocResult otoc_symmetric_exact_dense(int n, int d, int r) {
  detail_otoc::check_sym_sites(n, r);
  SectorLayout layout = layout_for(n, d);
  std::vector<Eigen::MatrixXcd> w = exchange_sector_blocks(layout, 1);
  std::vector<Eigen::MatrixXcd> v = exchange_sector_blocks(layout, r);
  cplx total = 0.0;
  for (std::size_t si = 0; si < layout.sectors.size(); ++si)
    total += static_cast<double>(layout.sectors[si].mult) *
             haar_quartic_trace(w[si], v[si], w[si], v[si]);
  if (std::abs(total.imag()) > 1e-9)
    throw std::logic_error("otoc_symmetric_exact_dense: nonreal result");

  OtocResult res;
  res.n = n;
  res.d = d;
  res.mode = "sym";
  res.r = r;
  res.F = total.real() / static_cast<double>(pow_ll(d, n));
  return res;
}

// Monte Carlo over symmetric Haar draws, evaluated in the Schur basis where
// each draw is block diagonal. Worker w consumes stream w of the seed and
// handles a contiguous share of the samples; partial sums are merged in
// ascending worker order, so results are reproducible at a fixed worker count.
inline OtocResult otoc_symmetric_mc(int n, int d, int r, long long samples,
                                    unsigned long long seed, int workers = 1) {
  detail_otoc::check_sym_sites(n, r);
  if (samples < 2) throw std::invalid_argument("otoc mc: need at least 2 samples");
  auto basis = get_schur_basis_cached(n, d);
  SectorLayout layout = layout_of(*basis);

  Eigen::MatrixXcd w_s = to_schur(exchange_dense(n, d, 1), *basis).cast<cplx>();
  Eigen::MatrixXcd v_s = to_schur(exchange_dense(n, d, r), *basis).cast<cplx>();
  const double norm = 1.0 / static_cast<double>(layout.dim);

  std::vector<Accumulator> parts(std::max(workers, 1));
  run_partitioned(samples, workers, [&](int wkr, long long begin, long long end) {
    RngStream rng(seed, static_cast<unsigned long long>(wkr));
    for (long long i = begin; i < end; ++i) {
      Eigen::MatrixXcd u = sample(layout, rng).block_diagonal(layout);
      Eigen::MatrixXcd wt = u * w_s * u.adjoint();
      Eigen::MatrixXcd m = wt * v_s;
      parts[wkr].add((m * m).trace().real() * norm);
    }
  });
  Accumulator acc;
  for (const Accumulator& p : parts) acc.merge(p);
  MeanStderr ms = acc.result();

  OtocResult res;
  res.n = n;
  res.d = d;
  res.mode = "sym";
  res.r = r;
  res.F = ms.mean;
  res.stderr_ = ms.stderr_;
  res.n_samples = samples;
  res.seed = seed;
  return res;
}

// Exact Pauli-probe residual, qubits only:
// F = (1/2^n) (1/3) sum_{P in {X,Y,Z} at site r} E[Tr(W~ P W~ P)].
// Needs the Schur basis for the probe, hence the dense cap applies.
inline OtocResult otoc_pauli_exact(int n, int d, int r) {
  if (d != 2)
    throw std::invalid_argument("otoc pauli exact: only d = 2 is supported");
  if (n < 2) throw std::invalid_argument("otoc: need n >= 2");
  if (r < 1 || r > n) throw std::invalid_argument("otoc: pauli probe needs 1 <= r <= n");
  auto basis = get_schur_basis_cached(n, d);
  SectorLayout layout = layout_of(*basis);
  std::vector<Eigen::MatrixXcd> w = exchange_sector_blocks(layout, 1);

  double total = 0.0;
  for (const Eigen::MatrixXcd& p : qubit_paulis_at_site(n, r))
    total += mixed_block_otoc(w, to_schur(p, *basis), layout);

  OtocResult res;
  res.n = n;
  res.d = d;
  res.mode = "pauli";
  res.r = r;
  res.F = total / 3.0 / static_cast<double>(layout.dim);
  return res;
}

// Monte Carlo twin of otoc_pauli_exact; each sample averages the three
// Pauli probes under one shared draw.
inline OtocResult otoc_pauli_mc(int n, int d, int r, long long samples,
                                unsigned long long seed, int workers = 1) {
  if (d != 2) throw std::invalid_argument("otoc pauli mc: only d = 2 is supported");
  if (n < 2) throw std::invalid_argument("otoc: need n >= 2");
  if (r < 1 || r > n) throw std::invalid_argument("otoc: pauli probe needs 1 <= r <= n");
  if (samples < 2) throw std::invalid_argument("otoc mc: need at least 2 samples");
  auto basis = get_schur_basis_cached(n, d);
  SectorLayout layout = layout_of(*basis);

  Eigen::MatrixXcd w_s = to_schur(exchange_dense(n, d, 1), *basis).cast<cplx>();
  std::vector<Eigen::MatrixXcd> probes;
  for (const Eigen::MatrixXcd& p : qubit_paulis_at_site(n, r))
    probes.push_back(to_schur(p, *basis));
  const double norm = 1.0 / static_cast<double>(layout.dim);

  std::vector<Accumulator> parts(std::max(workers, 1));
  run_partitioned(samples, workers, [&](int wkr, long long begin, long long end) {
    RngStream rng(seed, static_cast<unsigned long long>(wkr));
    for (long long i = begin; i < end; ++i) {
      Eigen::MatrixXcd u = sample(layout, rng).block_diagonal(layout);
      Eigen::MatrixXcd wt = u * w_s * u.adjoint();
      double val = 0.0;
      for (const Eigen::MatrixXcd& p : probes) {
        Eigen::MatrixXcd m = wt * p;
        val += (m * m).trace().real();
      }
      parts[wkr].add(val / 3.0 * norm);
    }
  });
  Accumulator acc;
  for (const Accumulator& p : parts) acc.merge(p);
  MeanStderr ms = acc.result();

  OtocResult res;
  res.n = n;
  res.d = d;
  res.mode = "pauli";
  res.r = r;
  res.F = ms.mean;
  res.stderr_ = ms.stderr_;
  res.n_samples = samples;
  res.seed = seed;
  return res;
}

struct OtocSweep {
  std::vector<OtocResult> rows;
  FitResult fit;  // log F vs log n
};

// Size sweep with a power-law fit. samples == 0 selects the exact paths;
// r_opt == 0 selects the per-size default probe site. MC points are weighted
// by 1/stderr^2 in the fit, exact points are unweighted.
inline OtocSweep scaling_sweep(int n_min, int n_max, int d, OtocMode mode,
                               long long samples = 0, unsigned long long seed = 0,
                               int r_opt = 0, int workers = 1) {
  if (n_min < 2 || n_max < n_min)
    throw std::invalid_argument("scaling_sweep: need 2 <= n_min <= n_max");
  OtocSweep sweep;
  std::vector<double> xs, ys, es;
  for (int n = n_min; n <= n_max; ++n) {
    int r = r_opt > 0 ? r_opt : default_probe_site(n);
    OtocResult row;
    if (mode == OtocMode::Sym) {
      row = samples == 0 ? otoc_symmetric_exact(n, d, r)
                         : otoc_symmetric_mc(n, d, r, samples, seed, workers);
    } else {
      row = samples == 0 ? otoc_pauli_exact(n, d, r)
                         : otoc_pauli_mc(n, d, r, samples, seed, workers);
    }
    sweep.rows.push_back(row);
    xs.push_back(static_cast<double>(n));
    ys.push_back(row.F);
    es.push_back(row.stderr_);
  }
  sweep.fit = power_law_fit(xs, ys, samples == 0 ? std::vector<double>{} : es);
  return sweep;
}

}  // namespace schurand
