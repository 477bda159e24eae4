#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "schurand/haar.hpp"
#include "schurand/irrep.hpp"
#include "schurand/partition.hpp"
#include "schurand/rng.hpp"
#include "schurand/util.hpp"

namespace schurand {

// Per-sector data backing the CQA ansatz: YJM diagonals, the
// adjacent-transposition sum with its eigendecomposition (so the gamma factor
// exponentiates exactly, no Trotter step), and the generator list defining
// the parameter order.
struct QntkRep {
  IrrepBlockRep rep;
  long long dim = 0;  // d_lambda
  std::vector<Eigen::VectorXd> yjm;            // yjm[k-1] = diagonal of X_k
  std::vector<std::pair<int, int>> beta_pairs;  // (k, l) with 2 <= k <= l <= n
  Eigen::MatrixXd h_s;                          // sum_j pi((j, j+1))
  Eigen::MatrixXd h_s_vecs;
  Eigen::VectorXd h_s_vals;

  int n() const { return rep.n; }
  int params_per_layer() const { return static_cast<int>(beta_pairs.size()) + 1; }
  // Diagonal of the generator X_k X_l for one beta parameter.
  Eigen::VectorXd beta_generator(int pair_index) const {
    auto [k, l] = beta_pairs[pair_index];
    return yjm[k - 1].cwiseProduct(yjm[l - 1]);
  }
};

inline QntkRep build_qntk_rep(const Partition& lam) {
  QntkRep q;
  q.rep = build_irrep(lam);
  q.dim = q.rep.dim;
  const int n = q.rep.n;
  q.yjm.reserve(n);
  for (int k = 1; k <= n; ++k) {
    Eigen::VectorXd v(q.dim);
    for (long long t = 0; t < q.dim; ++t) v(t) = q.rep.contents[t][k - 1];
    q.yjm.push_back(std::move(v));
  }
  for (int k = 2; k <= n; ++k)
    for (int l = k; l <= n; ++l) q.beta_pairs.push_back({k, l});
  q.h_s = Eigen::MatrixXd::Zero(q.dim, q.dim);
  for (int j = 1; j <= n - 1; ++j) q.h_s += q.rep.gen(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.h_s);
  q.h_s_vecs = es.eigenvectors();
  q.h_s_vals = es.eigenvalues();
  return q;
}

// Parameters of the layered ansatz U = U_L ... U_1 with
// U_l = exp(-i sum_{k<=l'} beta X_k X_l') * exp(-i gamma H_S);
// within each layer the gamma factor acts first. Flat layout: per layer the
// beta entries in beta_pairs order, then gamma.
struct CqaAnsatz {
  Partition lambda;
  int layers = 1;
  std::vector<double> theta;

  static CqaAnsatz zeros(const QntkRep& rep, int layers) {
    CqaAnsatz a;
    a.lambda = rep.rep.lambda;
    a.layers = layers;
    a.theta.assign(static_cast<std::size_t>(layers) * rep.params_per_layer(), 0.0);
    return a;
  }
  void init_uniform(RngStream& rng) {
    const double pi = 3.14159265358979323846;
    for (double& t : theta) t = rng.uniform(-pi, pi);
  }
  void check(const QntkRep& rep) const {
    if (layers < 1) throw std::invalid_argument("ansatz: need at least one layer");
    if (theta.size() != static_cast<std::size_t>(layers) * rep.params_per_layer())
      throw std::invalid_argument("ansatz: parameter count does not match shape");
    for (double t : theta)
      if (!std::isfinite(t)) throw std::invalid_argument("ansatz: nonfinite parameter");
  }
};

struct LearningProblem {
  Eigen::MatrixXcd observable;  // Hermitian, d_lambda x d_lambda
  Eigen::MatrixXcd rho;         // sector state
  double e0 = 0.0;
  double eta = 0.01;
};

// The paper's example observable class: Heisenberg-type sum of exchange
// terms on neighboring sites, restricted to the sector.
inline Eigen::MatrixXcd heisenberg_observable(const QntkRep& rep, int d) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(rep.dim, rep.dim);
  for (int j = 1; j <= rep.n() - 1; ++j) o += exchange_block(rep.rep, j, d);
  return o.cast<std::complex<double>>();
}

// Ground-state learning on the sector: pure first-GT-basis state (or the
// maximally mixed sector state), target = smallest eigenvalue of O.
inline LearningProblem default_problem(const QntkRep& rep, int d, bool mixed_rho = false,
                                       double eta = 0.01) {
  LearningProblem p;
  p.observable = heisenberg_observable(rep, d);
  if (mixed_rho) {
    p.rho = Eigen::MatrixXcd::Identity(rep.dim, rep.dim) / static_cast<double>(rep.dim);
  } else {
    p.rho = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    p.rho(0, 0) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p.observable);
  p.e0 = es.eigenvalues().minCoeff();
  p.eta = eta;
  return p;
}

namespace detail_qntk {

using cplx = std::complex<double>;

inline Eigen::VectorXcd phase_vector(const Eigen::VectorXd& angles) {
  Eigen::VectorXcd out(angles.size());
  for (long long i = 0; i < angles.size(); ++i)
    out(i) = cplx(std::cos(angles(i)), -std::sin(angles(i)));  // e^{-i angle}
  return out;
}

// exp(-i gamma H_S) through the cached eigendecomposition.
inline Eigen::MatrixXcd gamma_factor(const QntkRep& rep, double gamma) {
  Eigen::VectorXcd ph = phase_vector(gamma * rep.h_s_vals);
  return (rep.h_s_vecs.cast<cplx>() * ph.asDiagonal()) *
         rep.h_s_vecs.transpose().cast<cplx>();
}

// exp(-i sum beta_kl X_k X_l) for one layer: a pure phase diagonal.
inline Eigen::VectorXcd yjm_factor(const QntkRep& rep, const double* beta) {
  Eigen::VectorXd angles = Eigen::VectorXd::Zero(rep.dim);
  for (std::size_t p = 0; p < rep.beta_pairs.size(); ++p)
    angles += beta[p] * rep.beta_generator(static_cast<int>(p));
  return phase_vector(angles);
}

}  // namespace detail_qntk

inline Eigen::MatrixXcd ansatz_unitary(const QntkRep& rep, const CqaAnsatz& ansatz) {
  ansatz.check(rep);
  const int per = rep.params_per_layer();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
  for (int layer = 0; layer < ansatz.layers; ++layer) {
    const double* theta = ansatz.theta.data() + static_cast<std::size_t>(layer) * per;
    Eigen::MatrixXcd g = detail_qntk::gamma_factor(rep, theta[per - 1]);
    Eigen::VectorXcd ph = detail_qntk::yjm_factor(rep, theta);
    u = (ph.asDiagonal() * g) * u;  // layer 1 ends up rightmost
  }
  return u;
}

// Loss deviation eps = Tr(rho U^dag O U) - E0 and its analytic gradient via
// one forward state sweep and one backward observable sweep. A parameter in
// factor F = exp(-i theta H) contributes i Tr(rho_before_F [H, O_pulled]),
// where O_pulled includes F itself: H commutes with F, so pulling through F
// is free, and the paired state is the one before the factor.
inline std::pair<double, Eigen::VectorXd> loss_and_grad(const QntkRep& rep,
                                                        const CqaAnsatz& ansatz,
                                                        const LearningProblem& problem) {
  ansatz.check(rep);
  if (problem.observable.rows() != rep.dim || problem.rho.rows() != rep.dim)
    throw std::invalid_argument("loss_and_grad: dimension mismatch");
  using detail_qntk::cplx;
  const int dim = static_cast<int>(rep.dim);
  const int per = rep.params_per_layer();
  const int layers = ansatz.layers;

  // Factor sequence in application order: gamma_1, yjm_1, gamma_2, yjm_2, ...
  std::vector<Eigen::MatrixXcd> gammas(layers);
  std::vector<Eigen::VectorXcd> phases(layers);
  for (int layer = 0; layer < layers; ++layer) {
    const double* theta = ansatz.theta.data() + static_cast<std::size_t>(layer) * per;
    gammas[layer] = detail_qntk::gamma_factor(rep, theta[per - 1]);
    phases[layer] = detail_qntk::yjm_factor(rep, theta);
  }

  // Forward: state after each factor (2 per layer).
  std::vector<Eigen::MatrixXcd> state_after(2 * layers + 1);
  state_after[0] = problem.rho;
  for (int layer = 0; layer < layers; ++layer) {
    const Eigen::MatrixXcd& g = gammas[layer];
    state_after[2 * layer + 1] = g * state_after[2 * layer] * g.adjoint();
    const Eigen::VectorXcd& ph = phases[layer];
    state_after[2 * layer + 2] =
        ph.asDiagonal() * state_after[2 * layer + 1] * ph.conjugate().asDiagonal();
  }

  const double eps =
      (state_after[2 * layers] * problem.observable).trace().real() - problem.e0;

  // Backward: observable pulled back through the factors above each slot.
  Eigen::VectorXd grad(static_cast<std::size_t>(layers) * per);
  Eigen::MatrixXcd obs = problem.observable;
  for (int layer = layers - 1; layer >= 0; --layer) {
    const std::size_t base = static_cast<std::size_t>(layer) * per;
    // Pull through the YJM factor of this layer; the beta generators are
    // diagonal, so they commute with it and pair with the pre-factor state.
    const Eigen::VectorXcd& ph = phases[layer];
    obs = ph.conjugate().asDiagonal() * obs * ph.asDiagonal();
    const Eigen::MatrixXcd& rho_y = state_after[2 * layer + 1];
    for (std::size_t p = 0; p + 1 < static_cast<std::size_t>(per); ++p) {
      Eigen::VectorXd h = rep.beta_generator(static_cast<int>(p));
      Eigen::MatrixXcd comm = h.cast<cplx>().asDiagonal() * obs;
      comm -= obs * h.cast<cplx>().asDiagonal();
      grad(base + p) = (cplx(0.0, 1.0) * (rho_y * comm).trace()).real();
    }
    // Gamma slot: H_S commutes with its own factor, so after pulling the
    // observable through it the paired state is the end of the layer below.
    const Eigen::MatrixXcd& g = gammas[layer];
    obs = g.adjoint() * obs * g;
    const Eigen::MatrixXcd& rho_g = state_after[2 * layer];
    Eigen::MatrixXcd hs = rep.h_s.cast<cplx>();
    Eigen::MatrixXcd comm = hs * obs - obs * hs;
    grad(base + per - 1) = (cplx(0.0, 1.0) * (rho_g * comm).trace()).real();
  }
  (void)dim;
  return {eps, grad};
}

inline double qntk_empirical(const QntkRep& rep, const CqaAnsatz& ansatz,
                             const LearningProblem& problem) {
  auto [eps, grad] = loss_and_grad(rep, ansatz, problem);
  (void)eps;
  return grad.squaredNorm();
}

// Haar average of the kernel over independent (U_+, U_-) per slot:
//   Kbar = 2 / ((D+1)(D^2-1)) * (Tr O^2 - (Tr O)^2 / D) * sum_l (Tr H_l^2 - (Tr H_l)^2 / D).
// Undefined at D = 1 (the denominator vanishes; such sectors have trivial
// dynamics anyway).
inline double qntk_average(const Eigen::MatrixXcd& observable,
                           const std::vector<Eigen::MatrixXcd>& generators) {
  const long long dd = observable.rows();
  if (dd < 2) throw std::invalid_argument("qntk_average: needs d_lambda >= 2");
  const double d = static_cast<double>(dd);
  auto centered = [&](const Eigen::MatrixXcd& m) {
    double tr2 = (m * m).trace().real();
    double tr = m.trace().real();
    return tr2 - tr * tr / d;
  };
  double sum_h = 0.0;
  for (const Eigen::MatrixXcd& h : generators) {
    if (h.rows() != dd) throw std::invalid_argument("qntk_average: generator size");
    sum_h += centered(h);
  }
  return 2.0 / ((d + 1.0) * (d * d - 1.0)) * centered(observable) * sum_h;
}

// One layer's worth of CQA generators, in parameter order.
inline std::vector<Eigen::MatrixXcd> cqa_generators(const QntkRep& rep) {
  using detail_qntk::cplx;
  std::vector<Eigen::MatrixXcd> gens;
  for (std::size_t p = 0; p < rep.beta_pairs.size(); ++p) {
    Eigen::VectorXd h = rep.beta_generator(static_cast<int>(p));
    gens.push_back(Eigen::MatrixXcd(h.cast<cplx>().asDiagonal()));
  }
  gens.push_back(rep.h_s.cast<cplx>());
  return gens;
}

inline double cqa_qntk_average(const QntkRep& rep, const Eigen::MatrixXcd& observable,
                               int layers) {
  return layers * qntk_average(observable, cqa_generators(rep));
}

// Order-of-magnitude rule of thumb: N local observable terms, L variational
// angles, sector dimension d_lambda.
inline double heuristic_kbar(double n_terms, double angle_count, double d_lambda) {
  if (n_terms <= 0 || angle_count <= 0 || d_lambda <= 0)
    throw std::invalid_argument("heuristic_kbar: positive inputs required");
  return n_terms * n_terms * angle_count / d_lambda;
}

// Empirical kernel mean under the 2-design idealization: every slot gets an
// independent Haar pair (U_+, U_-), so the expectation equals qntk_average
// with the same generators repeated per layer.
inline MeanStderr empirical_kbar_haar(const QntkRep& rep,
                                      const LearningProblem& problem, int layers,
                                      long long draws, unsigned long long seed,
                                      int workers = 1) {
  using detail_qntk::cplx;
  if (draws < 2) throw std::invalid_argument("empirical_kbar_haar: need >= 2 draws");
  std::vector<Eigen::MatrixXcd> gens = cqa_generators(rep);
  std::vector<Accumulator> parts(std::max(workers, 1));
  run_partitioned(draws, std::max(workers, 1),
                  [&](int wkr, long long begin, long long end) {
                    RngStream rng(seed, static_cast<unsigned long long>(wkr));
                    for (long long i = begin; i < end; ++i) {
                      double k = 0.0;
                      for (int layer = 0; layer < layers; ++layer)
                        for (const Eigen::MatrixXcd& h : gens) {
                          Eigen::MatrixXcd up = haar_block(rep.dim, rng);
                          Eigen::MatrixXcd um = haar_block(rep.dim, rng);
                          Eigen::MatrixXcd obs = um.adjoint() * problem.observable * um;
                          Eigen::MatrixXcd comm = h * obs - obs * h;
                          cplx tr =
                              (up * problem.rho * up.adjoint() * comm).trace();
                          double g = (cplx(0.0, 1.0) * tr).real();
                          k += g * g;
                        }
                      parts[wkr].add(k);
                    }
                  });
  Accumulator acc;
  for (const auto& p : parts) acc.merge(p);
  return acc.result();
}

// Mean empirical kernel over uniformly random CQA parameters (the
// finite-depth comparison to the Haar idealization above).
inline MeanStderr empirical_kbar_cqa(const QntkRep& rep, const LearningProblem& problem,
                                     int layers, long long draws,
                                     unsigned long long seed, int workers = 1) {
  if (draws < 2) throw std::invalid_argument("empirical_kbar_cqa: need >= 2 draws");
  std::vector<Accumulator> parts(std::max(workers, 1));
  run_partitioned(draws, std::max(workers, 1),
                  [&](int wkr, long long begin, long long end) {
                    RngStream rng(seed, static_cast<unsigned long long>(wkr));
                    CqaAnsatz a = CqaAnsatz::zeros(rep, layers);
                    for (long long i = begin; i < end; ++i) {
                      a.init_uniform(rng);
                      parts[wkr].add(qntk_empirical(rep, a, problem));
                    }
                  });
  Accumulator acc;
  for (const auto& p : parts) acc.merge(p);
  return acc.result();
}

struct TrainStep {
  int t = 0;
  double eps = 0.0;
  double k = 0.0;
};

struct TrainResult {
  std::vector<TrainStep> trajectory;  // steps + 1 rows, pre-update values
  bool diverged = false;
  bool outside_guarantee = false;  // eta * Kbar >= 1 (or Kbar unavailable)
  double kbar = 0.0;               // analytic average for this shape (0 if d_lambda = 1)
};

// Plain gradient descent on (1/2) eps^2: theta <- theta - eta * eps * grad.
inline TrainResult train(const QntkRep& rep, CqaAnsatz& ansatz,
                         const LearningProblem& problem, int steps) {
  TrainResult out;
  if (rep.dim >= 2) {
    out.kbar = cqa_qntk_average(rep, problem.observable, ansatz.layers);
    out.outside_guarantee = problem.eta * out.kbar >= 1.0;
  } else {
    out.outside_guarantee = true;
  }
  double eps0 = 0.0;
  for (int t = 0; t <= steps; ++t) {
    auto [eps, grad] = loss_and_grad(rep, ansatz, problem);
    out.trajectory.push_back({t, eps, grad.squaredNorm()});
    if (t == 0) eps0 = std::abs(eps);
    if (std::abs(eps) > 10.0 * eps0 && eps0 > 0.0) {
      out.diverged = true;
      break;
    }
    if (t == steps) break;
    for (long long p = 0; p < grad.size(); ++p)
      ansatz.theta[static_cast<std::size_t>(p)] -= problem.eta * eps * grad(p);
  }
  return out;
}

}  // namespace schurand
