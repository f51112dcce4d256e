// End-to-end acceptance checks for the whole toolkit. Each criterion prints
// one PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "damageid/config.hpp"
#include "damageid/data_io.hpp"

using namespace damageid;

namespace {

int n_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << name << " ("
            << detail << ")\n";
  if (!pass) ++n_failures;
}

struct Twin {
  ExperimentConfig cfg;
  Problem prob;
  DamageProcess truth;
  ParameterGram gram;

  explicit Twin(const std::string& extra = "")
      : cfg(parse_config(extra)),
        prob(cfg.build_problem()),
        truth(cfg.truth_process()),
        gram(cfg.build_process_basis(), cfg.gram_s) {}
};

/// Process strictly inside the admissible box (quarter-g_max margins).
DamageProcess interior(const Twin& tw) {
  DamageProcess p = tw.truth;
  p.coeffs = Eigen::VectorXd::Constant(p.coeffs.size(), 0.25 * p.g_max) + 0.5 * tw.truth.coeffs;
  return p;
}

Vec gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

// --- criterion 1: closed-form damage ODE oracle --------------------------

double ode_error(int n_steps) {
  TimeGrid grid{1.0, n_steps};
  std::vector<Vec> y(grid.n_times(), Vec::Constant(1, 0.25));
  const auto traj = integrate_damage(grid, 1.0, Vec::Zero(1), y);
  double err = 0.0;
  for (int m = 0; m < grid.n_times(); ++m)
    err = std::max(err,
                   std::abs(traj[m](0) - (1.0 - std::sqrt(1.0 - 0.5 * grid.time(m)))));
  return err;
}

void criterion_1() {
  const double err = ode_error(1000);
  const double slope = std::log2(ode_error(250) / ode_error(500));
  std::ostringstream detail;
  detail << "max error " << err << ", order " << slope;
  report(1, "damage ODE matches the separable closed form",
         err <= 1e-6 && std::abs(slope - 2.0) <= 0.1, detail.str());
}

// --- criterion 2: bound preservation over random admissible data ---------

void criterion_2() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::ostringstream text;
    text << "[domain]\nnx = 16\n[time]\nsteps = 8\n[process]\ny_splines = 6\n"
         << "[mollifier]\nradius = 0.25\n[material]\nomega0 = " << 0.05 * unif(rng)
         << "\n[loads]\ntraction_x = " << 0.5 + unif(rng) << "\n";
    ExperimentConfig cfg = parse_config(text.str());
    Problem prob = cfg.build_problem();
    // random admissible process and initial damage
    DamageProcess g = cfg.initial_process();
    for (Eigen::Index i = 0; i < g.coeffs.size(); ++i) g.coeffs(i) = g.g_max * unif(rng);
    prob.d0 = Vec::Constant(prob.mesh.n_nodes(), cfg.material.omega0 * unif(rng));
    try {
      const StateTrajectory state = picard_forward_solve(prob, g, cfg.forward);
      for (const auto& d : state.damage)
        if (d.minCoeff() < 0.0 || d.maxCoeff() > cfg.material.omega1) ++violations;
    } catch (const std::exception&) {
      ++violations;
    }
  }
  report(2, "forward solves preserve the damage bounds", violations == 0,
         std::to_string(violations) + " violations in 100 runs");
}

// --- criterion 3: global Picard vs tightly-coupled per-step oracle -------

void criterion_3() {
  const Twin tw;
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);

  const Problem& prob = tw.prob;
  const auto source_at = [&](int m, const Vec& dm) {
    const Vec u = solve_equilibrium(prob.mesh, prob.material, dm, prob.rhs[m]);
    const int comps = prob.mesh.dim * prob.mesh.dim;
    const Vec flat = prob.moll_matrix * u;
    Eigen::MatrixXd grad(prob.mesh.n_nodes(), comps);
    for (int n = 0; n < prob.mesh.n_nodes(); ++n)
      for (int c = 0; c < comps; ++c) grad(n, c) = flat(n * comps + c);
    return apply_nemytskii(tw.truth, prob.grid.time(m), prob.mesh,
                           feature_field(grad, prob.mesh.dim));
  };
  Vec d = prob.d0;
  Vec y_old = source_at(0, d);
  double worst = 0.0;
  for (int m = 0; m < prob.grid.n_steps; ++m) {
    Vec d_next = d;
    for (int inner = 0; inner < 200; ++inner) {
      const Vec y_new = source_at(m + 1, d_next);
      const Vec candidate = damage_step(prob.material.alpha, prob.grid.dt(), d, y_old, y_new);
      const double change = (candidate - d_next).lpNorm<Eigen::Infinity>();
      d_next = candidate;
      if (change <= 1e-12) break;
    }
    d = d_next;
    y_old = source_at(m + 1, d);
    worst = std::max(worst, (d - state.damage[m + 1]).lpNorm<Eigen::Infinity>());
  }
  std::ostringstream detail;
  detail << "sup-norm gap " << worst << ", " << state.sweeps << " sweeps";
  report(3, "Picard agrees with the tightly-coupled oracle",
         worst <= 1e-6 && state.sweeps <= 30, detail.str());
}

// --- criterion 4: contraction of the two-sweep map -----------------------

void criterion_4() {
  const Twin tw;
  std::vector<double> qs;
  bool nonincreasing = true, below_one = false;
  double prev = 1e100;
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double q = contraction_estimate(tw.prob, tw.truth, lam, 3, 11u);
    qs.push_back(q);
    if (q > prev + 1e-12) nonincreasing = false;
    if (q < 1.0) below_one = true;
    prev = q;
  }
  std::ostringstream detail;
  detail << "q(lambda) =";
  for (double q : qs) detail << ' ' << q;
  report(4, "fixed-point map contracts in the weighted norm", nonincreasing && below_one,
         detail.str());
}

// --- criterion 5: Taylor test of the linearization -----------------------

void criterion_5() {
  const Twin tw;
  const DamageProcess base = interior(tw);
  const StateTrajectory state = picard_forward_solve(tw.prob, base, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, base, state, tw.gram);
  const Vec phi = flatten_trajectory(state.u);

  std::mt19937_64 rng(5);
  double worst_slope_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Vec h = gaussian(op.n_param(), rng);
    h *= 0.2 * base.g_max / h.lpNorm<Eigen::Infinity>();
    const Vec jh = op.apply(h);
    std::vector<double> logs;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      DamageProcess gp = base;
      gp.coeffs += eps * h;
      const Vec rem = forward_operator(tw.prob, gp, tw.cfg.forward) - phi - eps * jh;
      logs.push_back(std::log10(data_norm(tw.prob, rem)));
    }
    const double slope = (logs.front() - logs.back()) / 3.0;
    worst_slope_err = std::max(worst_slope_err, std::abs(slope - 2.0));
  }
  std::ostringstream detail;
  detail << "max |slope - 2| = " << worst_slope_err << " over 10 directions";
  report(5, "Taylor remainder is second order", worst_slope_err <= 0.2, detail.str());
}

// --- criterion 6: adjoint identity ---------------------------------------

void criterion_6() {
  const Twin tw;
  const DamageProcess base = interior(tw);
  const StateTrajectory state = picard_forward_solve(tw.prob, base, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, base, state, tw.gram);
  const Vec wdiag = tw.prob.data_gram_diagonal();

  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec h = gaussian(op.n_param(), rng);
    const Vec r = gaussian(op.n_data(), rng);
    const Vec jh = op.apply(h);
    const double lhs = jh.dot(wdiag.cwiseProduct(r));
    const double rhs = tw.gram.inner(h, op.apply_adjoint(r));
    worst = std::max(worst,
                     std::abs(lhs - rhs) / (data_norm(tw.prob, jh) * data_norm(tw.prob, r)));
  }
  std::ostringstream detail;
  detail << "max relative mismatch " << worst << " over 20 pairs";
  report(6, "adjoint identity holds", worst <= 1e-8, detail.str());
}

// --- criterion 7: tangential-cone ratios are scale-stable ----------------

void criterion_7() {
  const Twin tw;
  std::vector<double> maxima;
  for (double scale : {1e-1, 1e-2, 1e-3}) {
    const ConeReport rep =
        cone_constant_estimate(tw.prob, tw.truth, tw.gram, tw.cfg.forward, 50, scale, 7u);
    maxima.push_back(rep.max_ratio);
  }
  std::ostringstream detail;
  detail << "max ratios";
  for (double m : maxima) detail << ' ' << m;
  report(7, "cone-condition ratios do not grow as the scale shrinks",
         maxima.back() <= 2.0 * maxima.front(), detail.str());
}

// --- criterion 8: ill-posedness evidence ---------------------------------

void criterion_8() {
  const Twin tw;
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);
  const int k_max = op.n_param() / 2;
  const auto sigmas = spectrum_probe(op, k_max);
  bool decayed = false;
  int k_at = -1;
  for (int k = 1; k < k_max; ++k)
    if (sigmas[k] <= 1e-3 * sigmas[0]) {
      decayed = true;
      k_at = k + 1;
      break;
    }

  const Measurement meas = synthesize_data(tw.prob, tw.truth, tw.cfg.forward, 0.05, 8);
  LandweberConfig cfg = tw.cfg.landweber;
  cfg.max_iters = 3000;
  const SemiconvergenceReport rep = semiconvergence_probe(
      tw.prob, tw.cfg.initial_process(), tw.truth, tw.gram, tw.cfg.forward, meas, cfg);
  const int last = static_cast<int>(rep.errors.size()) - 1;
  const bool interior_min = rep.min_index > 0 && rep.min_index < last &&
                            rep.errors[last] > rep.errors[rep.min_index];

  std::ostringstream detail;
  detail << "sigma_k/sigma_1 <= 1e-3 at k = " << k_at << "; error minimum at iterate "
         << rep.min_index << " of " << last;
  report(8, "spectrum decays and noise causes semiconvergence", decayed && interior_min,
         detail.str());
}

// --- criterion 9: twin-experiment regularization -------------------------

void criterion_9() {
  const Twin tw;
  const Measurement meas = synthesize_data(tw.prob, tw.truth, tw.cfg.forward, 0.01, 9);
  const LandweberRecord rec = landweber_run(tw.prob, tw.cfg.initial_process(), tw.gram,
                                            tw.cfg.forward, meas, tw.cfg.landweber);
  bool monotone = true;
  for (size_t k = 0; k + 1 < rec.residuals.size(); ++k)
    if (rec.residuals[k + 1] > rec.residuals[k] + 1e-14) monotone = false;
  const bool reached = rec.stopped_by_discrepancy && rec.stop_index <= 500;
  std::ostringstream detail;
  detail << "stopped at iterate " << rec.stop_index << ", residual "
         << rec.residuals.back() << " vs threshold " << 1.5 * meas.delta
         << (monotone ? ", residual monotone" : ", residual NOT monotone");
  report(9, "discrepancy-stopped Landweber identifies the twin process",
         reached && monotone && rec.abort_reason.empty(), detail.str());
}

// --- criterion 10: determinism -------------------------------------------

void criterion_10() {
  const std::string text = "[experiment]\nseed = 77\nnoise = 0.01\n";
  bool identical = true;
  std::string first_state, first_meas;
  for (int run = 0; run < 2; ++run) {
    const Twin tw(text);
    const std::uint64_t hash = fnv1a_hash(serialize_config(tw.cfg));
    const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
    const Measurement meas =
        synthesize_data(tw.prob, tw.truth, tw.cfg.forward, tw.cfg.noise, tw.cfg.seed);
    const std::string st = state_table(tw.prob, state, hash);
    const std::string mt = measurement_table(tw.prob, meas, hash);
    if (run == 0) {
      first_state = st;
      first_meas = mt;
    } else {
      identical = (st == first_state) && (mt == first_meas);
    }
  }
  report(10, "identical config and seed give bitwise-identical tables", identical,
         identical ? "state and measurement tables match" : "tables differ");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (n_failures == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << n_failures << " criteria failed\n";
  return 1;
}
