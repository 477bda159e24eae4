#include "schurand/otoc.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "schurand/haar.hpp"
#include "schurand/linalg.hpp"
#include "schurand/schur.hpp"

using namespace schurand;
using cd = std::complex<double>;

TEST(ExchangeObservable, TracelessAndNormalized) {
  for (int d : {2, 3}) {
    int n = (d == 2) ? 5 : 4;
    Eigen::MatrixXd w = exchange_dense(n, d, 1);
    EXPECT_NEAR(w.trace(), 0.0, 1e-10);
    EXPECT_NEAR((w.transpose() * w).trace(), static_cast<double>(pow_ll(d, n)),
                1e-8);
  }
}

TEST(ExchangeObservable, CommutesWithTransversals) {
  const int n = 4, d = 2;
  Eigen::MatrixXcd w = exchange_dense(n, d, 2).cast<cd>();
  RngStream rng(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd u = haar_block(d, rng);
    Eigen::MatrixXcd lift = u;
    for (int s = 1; s < n; ++s) lift = kron(lift, u).eval();
    EXPECT_LT((w * lift - lift * w).norm(), 1e-10);
  }
}

TEST(ExchangeObservable, BlocksMatchDenseThroughSchurTransform) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {3, 3}}) {
    auto basis = get_schur_basis_cached(n, d);
    SectorLayout layout = layout_of(*basis);
    for (int r = 1; r <= n - 1; ++r) {
      Eigen::MatrixXcd via_schur = to_schur(exchange_dense(n, d, r), *basis).cast<cd>();
      std::vector<Eigen::MatrixXcd> blocks = exchange_sector_blocks(layout, r);
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(layout.dim, layout.dim);
      for (std::size_t si = 0; si < layout.sectors.size(); ++si) {
        const SectorInfo& s = layout.sectors[si];
        for (long long m = 0; m < s.mult; ++m)
          expect.block(s.offset + m * s.dim, s.offset + m * s.dim, s.dim, s.dim) =
              blocks[si];
      }
      EXPECT_LT((via_schur - expect).norm(), 1e-9) << "n=" << n << " d=" << d
                                                   << " r=" << r;
    }
  }
}

TEST(OtocSymmetric, TwoSiteSelfValue) {
  OtocResult res = otoc_symmetric_exact(2, 2, 1);
  EXPECT_NEAR(res.F, 7.0 / 3.0, 1e-10);
  EXPECT_EQ(res.mode, "sym");
  EXPECT_EQ(res.stderr_, 0.0);
  // The matrix path agrees.
  EXPECT_NEAR(otoc_symmetric_exact_dense(2, 2, 1).F, 7.0 / 3.0, 1e-10);
}

TEST(OtocSymmetric, CharacterPathEqualsMatrixPath) {
  for (int n = 2; n <= 8; ++n) {
    int r = default_probe_site(n);
    EXPECT_NEAR(otoc_symmetric_exact(n, 2, r).F, otoc_symmetric_exact_dense(n, 2, r).F,
                1e-9)
        << "n=" << n << " d=2";
  }
  for (int n = 2; n <= 5; ++n) {
    int r = default_probe_site(n);
    EXPECT_NEAR(otoc_symmetric_exact(n, 3, r).F, otoc_symmetric_exact_dense(n, 3, r).F,
                1e-9)
        << "n=" << n << " d=3";
  }
}

TEST(OtocSymmetric, ProbeSiteIndependent) {
  double base = otoc_symmetric_exact_dense(5, 2, 1).F;
  for (int r = 2; r <= 4; ++r)
    EXPECT_NEAR(otoc_symmetric_exact_dense(5, 2, r).F, base, 1e-10);
}

TEST(OtocSymmetric, StrictlyPositiveUpToSixteen) {
  for (int n = 2; n <= 16; ++n) {
    double f = otoc_symmetric_exact(n, 2, default_probe_site(n)).F;
    EXPECT_GT(f, 0.0) << "n=" << n;
  }
}

TEST(OtocSymmetric, MonteCarloMatchesExact) {
  OtocResult exact = otoc_symmetric_exact(4, 2, 3);
  OtocResult mc = otoc_symmetric_mc(4, 2, 3, 4000, 17);
  ASSERT_GT(mc.stderr_, 0.0);
  EXPECT_NEAR(mc.F, exact.F, 3 * mc.stderr_);
}

TEST(OtocSymmetric, MonteCarloDeterministicRerun) {
  OtocResult a = otoc_symmetric_mc(3, 2, 2, 200, 23);
  OtocResult b = otoc_symmetric_mc(3, 2, 2, 200, 23);
  EXPECT_EQ(a.F, b.F);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(OtocPauli, TwoSiteValue) {
  OtocResult res = otoc_pauli_exact(2, 2, 1);
  EXPECT_NEAR(res.F, -1.0 / 3.0, 1e-10);
}

TEST(OtocPauli, RejectsNonQubits) {
  EXPECT_THROW(otoc_pauli_exact(3, 3, 1), std::invalid_argument);
  EXPECT_THROW(otoc_pauli_mc(3, 3, 1, 100, 5), std::invalid_argument);
}

TEST(OtocPauli, MonteCarloMatchesExact) {
  OtocResult exact = otoc_pauli_exact(3, 2, 2);
  OtocResult mc = otoc_pauli_mc(3, 2, 2, 4000, 29);
  ASSERT_GT(mc.stderr_, 0.0);
  EXPECT_NEAR(mc.F, exact.F, 3 * mc.stderr_);
}

TEST(OtocPauli, PositiveOnSmallSweep) {
  for (int n = 4; n <= 7; ++n)
    EXPECT_GT(otoc_pauli_exact(n, 2, default_probe_site(n)).F, 0.0) << "n=" << n;
}

TEST(ScalingSweep, SelfProbeFirstRow) {
  OtocSweep sweep = scaling_sweep(2, 4, 2, OtocMode::Sym, 0, 0, 1);
  ASSERT_EQ(sweep.rows.size(), 3u);
  EXPECT_NEAR(sweep.rows[0].F, 7.0 / 3.0, 1e-10);
  EXPECT_EQ(sweep.rows[0].n, 2);
}

TEST(ScalingSweep, SymmetricExactSlopeInRange) {
  OtocSweep sweep = scaling_sweep(4, 14, 2, OtocMode::Sym);
  ASSERT_EQ(sweep.rows.size(), 11u);
  for (const OtocResult& row : sweep.rows) EXPECT_GT(row.F, 0.0);
  EXPECT_GT(sweep.fit.slope, -3.0);
  EXPECT_LT(sweep.fit.slope, 0.0);
}

TEST(ScalingSweep, SymmetricParityDipAtFourThenCleanPowerLaw) {
  // n=4 sits in a parity dip: one sector contributes negatively and pulls
  // F(4) = 1/27 below F(5) = 1/15. From n=5 on the decay is a clean power
  // law, so a fit that starts at the dip has poor R^2 while the tail fit
  // is excellent.
  EXPECT_NEAR(otoc_symmetric_exact(4, 2, 2).F, 1.0 / 27.0, 1e-12);
  EXPECT_NEAR(otoc_symmetric_exact(5, 2, 2).F, 1.0 / 15.0, 1e-12);
  OtocSweep tail = scaling_sweep(5, 14, 2, OtocMode::Sym);
  EXPECT_GT(tail.fit.r_squared, 0.95);
  EXPECT_GT(tail.fit.slope, -3.0);
  EXPECT_LT(tail.fit.slope, 0.0);
  OtocSweep full = scaling_sweep(4, 14, 2, OtocMode::Sym);
  EXPECT_LT(full.fit.r_squared, tail.fit.r_squared);
}

TEST(ScalingSweep, PauliExactSlopeInRange) {
  OtocSweep sweep = scaling_sweep(4, 9, 2, OtocMode::Pauli);
  ASSERT_EQ(sweep.rows.size(), 6u);
  for (const OtocResult& row : sweep.rows) EXPECT_GT(row.F, 0.0);
  EXPECT_GT(sweep.fit.slope, -2.0);
  EXPECT_LT(sweep.fit.slope, 0.0);
}

TEST(ScalingSweep, ValidatesArguments) {
  EXPECT_THROW(scaling_sweep(1, 4, 2, OtocMode::Sym), std::invalid_argument);
  EXPECT_THROW(scaling_sweep(6, 4, 2, OtocMode::Sym), std::invalid_argument);
  EXPECT_THROW(otoc_symmetric_exact(4, 2, 4), std::invalid_argument);
  EXPECT_THROW(otoc_symmetric_exact(4, 2, 0), std::invalid_argument);
}

TEST(OtocModes, ParseAndName) {
  EXPECT_EQ(otoc_mode_name(parse_otoc_mode("sym")), "sym");
  EXPECT_EQ(otoc_mode_name(parse_otoc_mode("pauli")), "pauli");
  EXPECT_THROW(parse_otoc_mode("bogus"), std::invalid_argument);
}
