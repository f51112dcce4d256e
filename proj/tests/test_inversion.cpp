#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "damageid/data_io.hpp"
#include "twin_setup.hpp"

using namespace damageid;
using damageid::testing::TwinSetup;
using damageid::testing::small_config;

TEST_CASE("discrepancy rule with and without noise") {
  CHECK(discrepancy_stop(0.1, 0.1, 1.5));
  CHECK_FALSE(discrepancy_stop(0.2, 0.1, 1.5));
  CHECK(discrepancy_stop(1e-12, 0.0, 1.5));
  CHECK_FALSE(discrepancy_stop(1e-9, 0.0, 1.5));
  CHECK_THROWS_AS(discrepancy_stop(0.1, -1.0, 1.5), std::invalid_argument);
}

TEST_CASE("spectrum probe matches a dense SVD oracle on a tiny configuration") {
  TwinSetup tw("[domain]\nnx = 8\n[time]\nsteps = 4\n[process]\ny_splines = 5\n"
               "[mollifier]\nradius = 0.25\n");
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);

  // dense oracle: singular values of W^{1/2} J S with M_s^{-1} = S S^T
  Eigen::MatrixXd j(op.n_data(), op.n_param());
  for (int c = 0; c < op.n_param(); ++c)
    j.col(c) = op.apply(Vec::Unit(op.n_param(), c));
  const Eigen::MatrixXd whitened = tw.prob.data_gram_diagonal().cwiseSqrt().asDiagonal() * j *
                                   tw.gram.inverse_factor();
  const Eigen::VectorXd oracle =
      Eigen::JacobiSVD<Eigen::MatrixXd>(whitened).singularValues();

  const auto sigmas = spectrum_probe(op, 3);
  REQUIRE(sigmas.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(sigmas[k] == doctest::Approx(oracle(k)).epsilon(1e-6));
  CHECK(sigmas[0] >= sigmas[1]);
  CHECK(sigmas[1] >= sigmas[2]);
}

TEST_CASE("landweber stops immediately from a consistent start") {
  TwinSetup tw(small_config());
  Measurement meas = synthesize_data(tw.prob, tw.truth, tw.cfg.forward, 0.0, 1);
  LandweberConfig cfg = tw.cfg.landweber;
  cfg.step = 1.0;  // skip the power-iteration estimate; no step is taken anyway
  const LandweberRecord rec =
      landweber_run(tw.prob, tw.truth, tw.gram, tw.cfg.forward, meas, cfg);
  CHECK(rec.stop_index == 0);
  CHECK(rec.stopped_by_discrepancy);
  CHECK(rec.residuals.front() <= 1e-10);
}

TEST_CASE("oversized steps trigger the early-divergence warning") {
  TwinSetup tw(small_config());
  const Measurement meas = synthesize_data(tw.prob, tw.truth, tw.cfg.forward, 0.01, 3);
  LandweberConfig cfg = tw.cfg.landweber;
  cfg.max_iters = 5;
  cfg.stop_on_discrepancy = false;

  const StateTrajectory state =
      picard_forward_solve(tw.prob, tw.cfg.initial_process(), tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.cfg.initial_process(), state, tw.gram);
  const double sigma1 = spectrum_probe(op, 1).front();
  cfg.step = 50.0 / (sigma1 * sigma1);

  const LandweberRecord rec =
      landweber_run(tw.prob, tw.cfg.initial_process(), tw.gram, tw.cfg.forward, meas, cfg);
  CHECK(rec.step_warning);
}

TEST_CASE("cone samples are finite and scale-stable") {
  TwinSetup tw(small_config());
  const ConeReport coarse =
      cone_constant_estimate(tw.prob, tw.truth, tw.gram, tw.cfg.forward, 5, 1e-1, 7u);
  const ConeReport fine =
      cone_constant_estimate(tw.prob, tw.truth, tw.gram, tw.cfg.forward, 5, 1e-2, 7u);
  REQUIRE(!coarse.samples.empty());
  REQUIRE(!fine.samples.empty());
  for (const auto& s : coarse.samples) CHECK(std::isfinite(s.ratio));
  // remainder is O(|h|^2), secant O(|h|), so the ratio should not blow up
  CHECK(fine.max_ratio <= 5.0 * coarse.max_ratio + 1e-12);
  // eta shrinks with the scale
  CHECK(fine.max_eta < coarse.max_eta);
}

TEST_CASE("semiconvergence probe reports curves of matching length") {
  TwinSetup tw(small_config());
  const Measurement meas = synthesize_data(tw.prob, tw.truth, tw.cfg.forward, 0.05, 5);
  LandweberConfig cfg = tw.cfg.landweber;
  cfg.max_iters = 8;
  const SemiconvergenceReport rep = semiconvergence_probe(
      tw.prob, tw.cfg.initial_process(), tw.truth, tw.gram, tw.cfg.forward, meas, cfg);
  CHECK(rep.errors.size() == rep.residuals.size());
  CHECK(rep.errors.size() == 9);  // iterates 0..max_iters
  CHECK(rep.min_index >= 0);
}
