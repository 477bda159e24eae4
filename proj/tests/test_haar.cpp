#include "schurand/haar.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "schurand/linalg.hpp"
#include "schurand/pauli.hpp"
#include "schurand/rng.hpp"
#include "schurand/schur.hpp"

using namespace schurand;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_matrix(long long dim, RngStream& rng) {
  Eigen::MatrixXcd m(dim, dim);
  for (long long i = 0; i < dim; ++i)
    for (long long j = 0; j < dim; ++j) m(i, j) = rng.cnormal();
  return m;
}

Eigen::MatrixXcd random_hermitian(long long dim, RngStream& rng) {
  Eigen::MatrixXcd m = random_matrix(dim, rng);
  return (m + m.adjoint()) / 2.0;
}

// Assembles the dense Schur-basis matrix of a symmetric observable from its
// per-sector blocks: blkdiag over sectors of I_mult (x) block.
Eigen::MatrixXcd assemble_blocks(const std::vector<Eigen::MatrixXcd>& blocks,
                                 const SectorLayout& layout) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
  for (std::size_t si = 0; si < layout.sectors.size(); ++si) {
    const SectorInfo& s = layout.sectors[si];
    for (long long m = 0; m < s.mult; ++m)
      out.block(s.offset + m * s.dim, s.offset + m * s.dim, s.dim, s.dim) = blocks[si];
  }
  return out;
}

}  // namespace

TEST(Rng, DeterministicStreams) {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    ASSERT_EQ(va, vb);
    if (va != vc) any_diff = true;
  }
  EXPECT_TRUE(any_diff);
}

TEST(Rng, Uniform01InHalfOpenUnit) {
  RngStream rng(1, 0);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  RngStream rng(3, 0);
  double sum = 0, sumsq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Rng, ComplexNormalUnitVariance) {
  RngStream rng(4, 0);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += std::norm(rng.cnormal());
  EXPECT_NEAR(sum / n, 1.0, 0.02);
}

TEST(HaarSample, DeterministicAndUnitary) {
  SectorLayout layout = layout_for(4, 2);
  RngStream r1(99, 0), r2(99, 0);
  SymmetricUnitary u1 = sample(layout, r1);
  SymmetricUnitary u2 = sample(layout, r2);
  ASSERT_EQ(u1.blocks.size(), layout.sectors.size());
  for (std::size_t i = 0; i < u1.blocks.size(); ++i) {
    EXPECT_EQ(u1.blocks[i], u2.blocks[i]);
    long long dim = layout.sectors[i].dim;
    EXPECT_LT((u1.blocks[i].adjoint() * u1.blocks[i] -
               Eigen::MatrixXcd::Identity(dim, dim))
                  .norm(),
              1e-12);
  }
  // Dense assembly is unitary too.
  Eigen::MatrixXcd dense = u1.block_diagonal(layout);
  EXPECT_LT((dense.adjoint() * dense -
             Eigen::MatrixXcd::Identity(layout.dim, layout.dim))
                .norm(),
            1e-12);
}

TEST(HaarSample, EntryModulusMeansMatchHaar) {
  // E |u_ij|^2 = 1/dim for Haar on U(dim).
  const long long dim = 3;
  RngStream rng(5, 0);
  const int n_samples = 4000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < n_samples; ++s) acc += haar_block(dim, rng).cwiseAbs2();
  acc /= n_samples;
  // Var(|u|^2) = 1/d^2 * (d-1)/(d+1) < 1/d^2; 3 sigma with n = 4000.
  double tol = 3.0 / (dim * std::sqrt(static_cast<double>(n_samples)));
  for (long long i = 0; i < dim; ++i)
    for (long long j = 0; j < dim; ++j)
      EXPECT_NEAR(acc(i, j), 1.0 / dim, tol);
}

TEST(FirstMoment, ChannelProperties) {
  SectorLayout layout = layout_for(3, 2);
  RngStream rng(11, 0);
  Eigen::MatrixXcd x = random_matrix(layout.dim, rng);
  Eigen::MatrixXcd ex = first_moment(x, layout);
  // Idempotent, trace preserving, unital.
  EXPECT_LT((first_moment(ex, layout) - ex).norm(), 1e-12);
  EXPECT_NEAR(std::abs(ex.trace() - x.trace()), 0.0, 1e-12);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(layout.dim, layout.dim);
  EXPECT_LT((first_moment(eye, layout) - eye).norm(), 1e-12);
}

TEST(FirstMoment, PermutationAveragesToCharacterMultiple) {
  // E[U pi U^dag] = blkdiag over sectors of (chi_lambda(sigma)/d_lambda) I.
  auto basis = get_schur_basis_cached(4, 2);
  SectorLayout layout = layout_of(*basis);
  std::vector<int> sigma = {2, 3, 1, 4};  // 3-cycle, one-line
  Eigen::MatrixXd pi = permutation_matrix(site_permutation_indices(4, 2, sigma));
  Eigen::MatrixXcd pis = to_schur(pi, *basis).cast<cd>();
  Eigen::MatrixXcd avg = first_moment(pis, layout);
  Partition cycle_type(std::vector<int>{3, 1});
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
  for (const SectorInfo& s : layout.sectors) {
    double chi = static_cast<double>(character(s.lambda, cycle_type));
    for (long long i = 0; i < s.size(); ++i)
      expect(s.offset + i, s.offset + i) = chi / static_cast<double>(s.dim);
  }
  EXPECT_LT((avg - expect).norm(), 1e-10);
}

TEST(FirstMoment, MonteCarloAgreesAndConverges) {
  auto basis = get_schur_basis_cached(3, 2);
  SectorLayout layout = layout_of(*basis);
  RngStream mat_rng(21, 0);
  Eigen::MatrixXcd x = random_hermitian(layout.dim, mat_rng);
  Eigen::MatrixXcd exact = first_moment(x, layout);

  auto mc_error = [&](int n_samples, unsigned long long seed) {
    RngStream rng(seed, 0);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
    for (int s = 0; s < n_samples; ++s) {
      Eigen::MatrixXcd u = sample(layout, rng).block_diagonal(layout);
      acc += u * x * u.adjoint();
    }
    acc /= n_samples;
    return (acc - exact).norm();
  };

  double err_small = mc_error(500, 7);
  double err_big = mc_error(8000, 7);
  // 16x samples should shrink the error by about 4 (O(1/sqrt N)).
  EXPECT_LT(err_big, err_small);
  double ratio = err_small / err_big;
  EXPECT_GT(ratio, 1.6);
  EXPECT_LT(ratio, 11.0);
  // And the big run is close in absolute terms.
  EXPECT_LT(err_big, 0.15);
}

TEST(QuarticTrace, IdentityAndReductionCases) {
  const long long dim = 4;
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);
  // All identity: E Tr(I) = dim.
  EXPECT_NEAR(std::abs(haar_quartic_trace(eye, eye, eye, eye) - cd(dim, 0)), 0.0,
              1e-12);
  // b = e = I: E Tr(U a U^dag U c U^dag) = Tr(a c).
  RngStream rng(31, 0);
  Eigen::MatrixXcd a = random_matrix(dim, rng);
  Eigen::MatrixXcd c = random_matrix(dim, rng);
  EXPECT_NEAR(std::abs(haar_quartic_trace(a, eye, c, eye) - (a * c).trace()), 0.0,
              1e-10);
}

TEST(QuarticTrace, PauliFourthMomentOnU2) {
  // E Tr(UZU' Z UZU' Z) on U(2) = -2/3.
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  cd exact = haar_quartic_trace(z, z, z, z);
  EXPECT_NEAR(exact.real(), -2.0 / 3.0, 1e-12);
  EXPECT_NEAR(exact.imag(), 0.0, 1e-12);

  RngStream rng(41, 0);
  const int n_samples = 20000;
  double sum = 0, sumsq = 0;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::MatrixXcd u = haar_block(2, rng);
    Eigen::MatrixXcd m = u * z * u.adjoint() * z;
    double v = (m * m).trace().real();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n_samples;
  double se = std::sqrt((sumsq / n_samples - mean * mean) / n_samples);
  EXPECT_NEAR(mean, -2.0 / 3.0, 3 * se + 1e-12);
}

TEST(QuarticTrace, MonteCarloOnU3RandomInputs) {
  RngStream mat_rng(51, 0);
  const long long dim = 3;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::MatrixXcd a = random_hermitian(dim, mat_rng);
    Eigen::MatrixXcd b = random_hermitian(dim, mat_rng);
    cd exact = haar_quartic_trace(a, b, a, b);
    RngStream rng(60 + trial, 0);
    const int n_samples = 20000;
    double sum = 0, sumsq = 0;
    for (int s = 0; s < n_samples; ++s) {
      Eigen::MatrixXcd u = haar_block(dim, rng);
      Eigen::MatrixXcd m = u * a * u.adjoint() * b;
      double v = (m * m).trace().real();
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / n_samples;
    double se = std::sqrt((sumsq / n_samples - mean * mean) / n_samples);
    EXPECT_NEAR(mean, exact.real(), 3 * se + 1e-12);
    EXPECT_NEAR(exact.imag(), 0.0, 1e-10);
  }
}

TEST(QuarticTrace, ConjugationInvariant) {
  RngStream rng(71, 0);
  const long long dim = 4;
  Eigen::MatrixXcd a = random_matrix(dim, rng), b = random_matrix(dim, rng);
  Eigen::MatrixXcd c = random_matrix(dim, rng), e = random_matrix(dim, rng);
  Eigen::MatrixXcd v = haar_block(dim, rng);
  cd base = haar_quartic_trace(a, b, c, e);
  cd conj = haar_quartic_trace(v * a * v.adjoint(), v * b * v.adjoint(),
                               v * c * v.adjoint(), v * e * v.adjoint());
  EXPECT_NEAR(std::abs(base - conj), 0.0, 1e-9);
}

TEST(PairMoment, SolvesDefiningSystem) {
  // Tr E = (Tr w)^2 = alpha D^2 + beta D; Tr(S E) = Tr(w^2) = alpha D + beta D^2.
  RngStream rng(81, 0);
  for (long long dim : {2LL, 3LL, 5LL}) {
    Eigen::MatrixXcd w = random_matrix(dim, rng);
    auto [alpha, beta] = pair_moment(w);
    cd trw = w.trace(), trw2 = (w * w).trace();
    double dd = static_cast<double>(dim);
    EXPECT_NEAR(std::abs(alpha * dd * dd + beta * dd - trw * trw), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(alpha * dd + beta * dd * dd - trw2), 0.0, 1e-10);
  }
}

TEST(PairMoment, ConsistentWithQuartic) {
  // E Tr(W~ a W~ b) = alpha Tr(ab) + beta Tr(a)Tr(b) must match the quartic
  // formula with (w, a, w, b).
  RngStream rng(91, 0);
  for (int trial = 0; trial < 20; ++trial) {
    long long dim = 2 + trial % 3;
    Eigen::MatrixXcd w = random_matrix(dim, rng);
    Eigen::MatrixXcd a = random_matrix(dim, rng);
    Eigen::MatrixXcd b = random_matrix(dim, rng);
    auto [alpha, beta] = pair_moment(w);
    cd lhs = alpha * (a * b).trace() + beta * a.trace() * b.trace();
    cd rhs = haar_quartic_trace(w, a, w, b);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
  }
}

TEST(PairMoment, DeterministicWhenOneDimensional) {
  Eigen::MatrixXcd w(1, 1);
  w(0, 0) = cd(2.0, 0.5);
  auto [alpha, beta] = pair_moment(w);
  EXPECT_NEAR(std::abs(alpha - w(0, 0) * w(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(beta), 0.0, 1e-15);
}

TEST(MixedBlockOtoc, IdentityProbeGivesFullTrace) {
  // P = I: E Tr(W~ W~) = sum_lambda m_lambda Tr(W_lambda^2), deterministic.
  auto basis = get_schur_basis_cached(4, 2);
  SectorLayout layout = layout_of(*basis);
  RngStream rng(101, 0);
  std::vector<Eigen::MatrixXcd> blocks;
  double expect = 0.0;
  for (const SectorInfo& s : layout.sectors) {
    Eigen::MatrixXcd w = random_hermitian(s.dim, rng);
    expect += s.mult * (w * w).trace().real();
    blocks.push_back(w);
  }
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(layout.dim, layout.dim);
  EXPECT_NEAR(mixed_block_otoc(blocks, eye, layout), expect, 1e-9);
}

TEST(MixedBlockOtoc, MatchesMonteCarlo) {
  auto basis = get_schur_basis_cached(3, 2);
  SectorLayout layout = layout_of(*basis);
  RngStream rng(111, 0);
  std::vector<Eigen::MatrixXcd> blocks;
  for (const SectorInfo& s : layout.sectors) blocks.push_back(random_hermitian(s.dim, rng));
  Eigen::MatrixXcd p = random_hermitian(layout.dim, rng);
  double exact = mixed_block_otoc(blocks, p, layout);

  Eigen::MatrixXcd w_dense = assemble_blocks(blocks, layout);
  RngStream mc(112, 0);
  const int n_samples = 20000;
  double sum = 0, sumsq = 0;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::MatrixXcd u = sample(layout, mc).block_diagonal(layout);
    Eigen::MatrixXcd wt = u * w_dense * u.adjoint();
    Eigen::MatrixXcd m = wt * p;
    double v = (m * m).trace().real();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n_samples;
  double se = std::sqrt((sumsq / n_samples - mean * mean) / n_samples);
  EXPECT_NEAR(mean, exact, 3 * se + 1e-12);
}

TEST(SecondMomentTrace, MatchesMixedBlockOtocForSymmetricW) {
  auto basis = get_schur_basis_cached(4, 2);
  SectorLayout layout = layout_of(*basis);
  RngStream rng(121, 0);
  std::vector<Eigen::MatrixXcd> blocks;
  for (const SectorInfo& s : layout.sectors) blocks.push_back(random_hermitian(s.dim, rng));
  Eigen::MatrixXcd p = random_hermitian(layout.dim, rng);
  Eigen::MatrixXcd w_dense = assemble_blocks(blocks, layout);

  double via_mixed = mixed_block_otoc(blocks, p, layout);
  cd via_general = second_moment_trace(w_dense, p, w_dense, p, layout);
  EXPECT_NEAR(via_general.real(), via_mixed, 1e-9);
  EXPECT_NEAR(via_general.imag(), 0.0, 1e-9);
}

TEST(SecondMomentTrace, SingleMultiplicityReducesToQuartic) {
  // A fabricated one-sector layout with mult 1 is plain Haar on U(D).
  SectorLayout layout;
  layout.n = 1;
  layout.d = 1;
  layout.dim = 4;
  SectorInfo s;
  s.lambda = Partition(std::vector<int>{1});
  s.dim = 4;
  s.mult = 1;
  s.offset = 0;
  layout.sectors.push_back(s);

  RngStream rng(131, 0);
  Eigen::MatrixXcd a1 = random_matrix(4, rng), b1 = random_matrix(4, rng);
  Eigen::MatrixXcd a2 = random_matrix(4, rng), b2 = random_matrix(4, rng);
  cd general = second_moment_trace(a1, b1, a2, b2, layout);
  cd quartic = haar_quartic_trace(a1, b1, a2, b2);
  EXPECT_NEAR(std::abs(general - quartic), 0.0, 1e-10);
}

TEST(SecondMomentTrace, MatchesMonteCarloGeneralInputs) {
  auto basis = get_schur_basis_cached(3, 2);
  SectorLayout layout = layout_of(*basis);
  RngStream rng(141, 0);
  Eigen::MatrixXcd a1 = random_hermitian(layout.dim, rng);
  Eigen::MatrixXcd b1 = random_hermitian(layout.dim, rng);
  Eigen::MatrixXcd a2 = random_hermitian(layout.dim, rng);
  Eigen::MatrixXcd b2 = random_hermitian(layout.dim, rng);
  cd exact = second_moment_trace(a1, b1, a2, b2, layout);

  RngStream mc(142, 0);
  const int n_samples = 20000;
  double sum_re = 0, sumsq_re = 0, sum_im = 0, sumsq_im = 0;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::MatrixXcd u = sample(layout, mc).block_diagonal(layout);
    cd v = (u * a1 * u.adjoint() * b1 * u * a2 * u.adjoint() * b2).trace();
    sum_re += v.real();
    sumsq_re += v.real() * v.real();
    sum_im += v.imag();
    sumsq_im += v.imag() * v.imag();
  }
  double mean_re = sum_re / n_samples;
  double se_re = std::sqrt((sumsq_re / n_samples - mean_re * mean_re) / n_samples);
  double mean_im = sum_im / n_samples;
  double se_im = std::sqrt((sumsq_im / n_samples - mean_im * mean_im) / n_samples);
  EXPECT_NEAR(mean_re, exact.real(), 3 * se_re + 1e-12);
  EXPECT_NEAR(mean_im, exact.imag(), 3 * se_im + 1e-12);
}

TEST(SecondMomentTrace, DegenerateGlobalPhaseCase) {
  // n = 1: the only sector is one-dimensional, U is a global phase, so the
  // average is the plain product trace.
  SectorLayout layout = layout_for(1, 2);
  RngStream rng(151, 0);
  Eigen::MatrixXcd a1 = random_matrix(2, rng), b1 = random_matrix(2, rng);
  Eigen::MatrixXcd a2 = random_matrix(2, rng), b2 = random_matrix(2, rng);
  cd got = second_moment_trace(a1, b1, a2, b2, layout);
  cd want = (a1 * b1 * a2 * b2).trace();
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-12);
}

TEST(PauliStrings, CompletenessRelation) {
  RngStream rng(161, 0);
  for (int n = 1; n <= 3; ++n)
    for (int d : {2, 3}) {
      if (n == 3 && d == 3) continue;  // 27-dim dense sum, fine but slow in debug
      long long dim = pow_ll(d, n);
      Eigen::MatrixXcd m = random_matrix(dim, rng);
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
      for (const PauliString& s : enumerate_pauli_strings(n, d)) {
        Eigen::MatrixXcd p = dense(s);
        acc += p * m * p.adjoint();
      }
      Eigen::MatrixXcd expect =
          static_cast<double>(dim) * m.trace() * Eigen::MatrixXcd::Identity(dim, dim);
      EXPECT_LT((acc - expect).norm(), 1e-9) << "n=" << n << " d=" << d;
    }
}

TEST(PauliStrings, OrthonormalAndIdentityFirst) {
  for (int d : {2, 3}) {
    auto strings = enumerate_pauli_strings(2, d);
    ASSERT_EQ(static_cast<long long>(strings.size()), pow_ll(d, 4));
    EXPECT_TRUE(strings[0].is_identity());
    long long dim = pow_ll(d, 2);
    for (std::size_t i = 0; i < strings.size(); i += 7) {
      Eigen::MatrixXcd p = dense(strings[i]);
      EXPECT_NEAR(std::abs((p.adjoint() * p).trace() - cd(dim, 0)), 0.0, 1e-10);
    }
  }
}
