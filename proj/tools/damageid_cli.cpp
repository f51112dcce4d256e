#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "damageid/config.hpp"
#include "damageid/data_io.hpp"

namespace {

using namespace damageid;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path.string());
  out << content;
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int trials = 20;
  double noise = -1.0;
  int max_iter = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool config_required = true) {
  cmd->add_option("--config", opt.config_path, "configuration file")->required(config_required);
  cmd->add_option("--out", opt.out_dir, "output directory (overrides the config)");
  cmd->add_option("--seed", opt.seed, "RNG seed (overrides the config)");
  cmd->add_option("--trials", opt.trials, "sample count for diagnostics");
  cmd->add_option("--noise", opt.noise, "noise fraction (overrides the config)");
  cmd->add_option("--max-iter", opt.max_iter, "iteration cap (overrides the config)");
}

ExperimentConfig load_config(const CommonOptions& opt) {
  ExperimentConfig cfg = parse_config(read_file(opt.config_path));
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.noise >= 0.0) cfg.noise = opt.noise;
  if (opt.max_iter >= 0) cfg.landweber.max_iters = opt.max_iter;
  return cfg;
}

int run_forward(const CommonOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  const std::uint64_t hash = fnv1a_hash(serialize_config(cfg));
  const Problem prob = cfg.build_problem();
  const StateTrajectory state = picard_forward_solve(prob, cfg.truth_process(), cfg.forward);
  write_file(cfg.output_dir, "state.csv", state_table(prob, state, hash));
  std::cout << "forward solve converged in " << state.sweeps << " sweeps (final update "
            << state.final_update << ")\n";
  return 0;
}

int run_synthesize(const CommonOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  const std::uint64_t hash = fnv1a_hash(serialize_config(cfg));
  const Problem prob = cfg.build_problem();
  const Measurement meas =
      synthesize_data(prob, cfg.truth_process(), cfg.forward, cfg.noise, cfg.seed);
  write_file(cfg.output_dir, "measurement.csv", measurement_table(prob, meas, hash));
  std::cout << "synthesized data with delta = " << meas.delta << "\n";
  return 0;
}

int run_invert(const CommonOptions& opt, const std::string& data_path) {
  const ExperimentConfig cfg = load_config(opt);
  const std::uint64_t hash = fnv1a_hash(serialize_config(cfg));
  const Problem prob = cfg.build_problem();
  Measurement meas;
  if (!data_path.empty())
    meas = read_measurement(prob, read_file(data_path));
  else
    meas = synthesize_data(prob, cfg.truth_process(), cfg.forward, cfg.noise, cfg.seed);

  const ParameterGram gram(cfg.build_process_basis(), cfg.gram_s);
  const LandweberRecord rec =
      landweber_run(prob, cfg.initial_process(), gram, cfg.forward, meas, cfg.landweber);
  write_file(cfg.output_dir, "iterates.csv", iterate_table(rec, gram, hash));
  DamageProcess g_final = cfg.initial_process();
  g_final.coeffs = rec.iterates.back();
  write_file(cfg.output_dir, "process.csv", process_table(g_final, hash));
  if (!rec.abort_reason.empty()) {
    std::cerr << "inversion aborted: " << rec.abort_reason << "\n";
    return 2;
  }
  std::cout << "stopped at iterate " << rec.stop_index << " with residual "
            << rec.residuals.back() << (rec.stopped_by_discrepancy ? " (discrepancy)" : "")
            << "\n";
  if (rec.step_warning) std::cout << "warning: residual increased early; step too large?\n";
  return 0;
}

int run_diagnose(const CommonOptions& opt, const std::string& kind) {
  const ExperimentConfig cfg = load_config(opt);
  const std::uint64_t hash = fnv1a_hash(serialize_config(cfg));
  const Problem prob = cfg.build_problem();
  const DamageProcess g = cfg.truth_process();
  const ParameterGram gram(cfg.build_process_basis(), cfg.gram_s);
  std::ostringstream table;
  table.precision(17);

  if (kind == "derivative" || kind == "adjoint") {
    const StateTrajectory state = picard_forward_solve(prob, g, cfg.forward);
    const LinearizedOperator op(prob, g, state, gram);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;
    if (kind == "derivative") {
      // Taylor remainder decay for random directions
      table << "trial,eps,remainder\n";
      const Vec phi = flatten_trajectory(state.u);
      for (int trial = 0; trial < opt.trials; ++trial) {
        Vec h(g.coeffs.size());
        for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = gauss(rng);
        h *= 0.2 * g.g_max / h.lpNorm<Eigen::Infinity>();
        const Vec jh = op.apply(h);
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          DamageProcess gp = g;
          gp.coeffs += eps * h;
          const Vec rem = forward_operator(prob, gp, cfg.forward) - phi - eps * jh;
          table << trial << ',' << eps << ',' << data_norm(prob, rem) << "\n";
        }
      }
    } else {
      table << "trial,mismatch\n";
      double worst = 0.0;
      for (int trial = 0; trial < opt.trials; ++trial) {
        Vec h(g.coeffs.size()), r(op.n_data());
        for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = gauss(rng);
        for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = gauss(rng);
        const Vec jh = op.apply(h);
        const double lhs = jh.dot(prob.data_gram_diagonal().cwiseProduct(r));
        const double rhs = gram.inner(h, op.apply_adjoint(r));
        const double mismatch =
            std::abs(lhs - rhs) / (data_norm(prob, jh) * data_norm(prob, r));
        worst = std::max(worst, mismatch);
        table << trial << ',' << mismatch << "\n";
      }
      std::cout << "max relative adjoint mismatch: " << worst << "\n";
    }
  } else if (kind == "cone") {
    table << "scale,trial,h_norm,ratio,eta\n";
    for (double scale : {1e-1, 1e-2, 1e-3}) {
      const ConeReport rep =
          cone_constant_estimate(prob, g, gram, cfg.forward, opt.trials, scale,
                                 static_cast<unsigned>(cfg.seed));
      for (size_t i = 0; i < rep.samples.size(); ++i)
        table << scale << ',' << i << ',' << rep.samples[i].h_norm << ','
              << rep.samples[i].ratio << ',' << rep.samples[i].eta << "\n";
    }
  } else if (kind == "contraction") {
    table << "lambda,q\n";
    for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double q =
          contraction_estimate(prob, g, lam, opt.trials, static_cast<unsigned>(cfg.seed));
      table << lam << ',' << q << "\n";
      std::cout << "q(" << lam << ") = " << q << "\n";
    }
  } else if (kind == "spectrum") {
    const StateTrajectory state = picard_forward_solve(prob, g, cfg.forward);
    const LinearizedOperator op(prob, g, state, gram);
    const int k = std::min(opt.trials, op.n_param());
    const auto sigmas = spectrum_probe(op, k);
    table << "k,sigma\n";
    for (size_t i = 0; i < sigmas.size(); ++i) table << i + 1 << ',' << sigmas[i] << "\n";
  } else if (kind == "semiconvergence") {
    const Measurement meas =
        synthesize_data(prob, g, cfg.forward, cfg.noise > 0 ? cfg.noise : 0.05, cfg.seed);
    const SemiconvergenceReport rep = semiconvergence_probe(
        prob, cfg.initial_process(), g, gram, cfg.forward, meas, cfg.landweber);
    table << "iter,error_Ms,residual_L2\n";
    for (size_t k = 0; k < rep.errors.size(); ++k)
      table << k << ',' << rep.errors[k] << ',' << rep.residuals[k] << "\n";
    std::cout << "error minimum at iterate " << rep.min_index << ", discrepancy index "
              << rep.stop_index << "\n";
  } else {
    throw std::invalid_argument("unknown diagnostic: " + kind);
  }

  table << "# config-hash = " << std::hex << hash << "\n";
  write_file(cfg.output_dir, "diagnose_" + kind + ".csv", table.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("DAMAGEID_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"damaged-elasticity forward solver and damage-process identification"};
  app.require_subcommand(1);

  CommonOptions fwd_opt, syn_opt, inv_opt, diag_opt;
  std::string data_path, diag_kind;

  CLI::App* fwd = app.add_subcommand("forward", "solve the coupled forward problem");
  add_common(fwd, fwd_opt);
  CLI::App* syn = app.add_subcommand("synthesize", "generate noisy synthetic data");
  add_common(syn, syn_opt);
  CLI::App* inv = app.add_subcommand("invert", "run the projected Landweber iteration");
  add_common(inv, inv_opt);
  inv->add_option("--data", data_path, "measurement file (default: synthesize internally)");
  CLI::App* diag = app.add_subcommand("diagnose", "run a diagnostic study");
  diag->add_option("kind", diag_kind,
                   "one of derivative, adjoint, cone, contraction, spectrum, semiconvergence")
      ->required();
  add_common(diag, diag_opt);

  try {
    app.parse(argc, argv);
    if (fwd->parsed()) return run_forward(fwd_opt);
    if (syn->parsed()) return run_synthesize(syn_opt);
    if (inv->parsed()) return run_invert(inv_opt, data_path);
    if (diag->parsed()) return run_diagnose(diag_opt, diag_kind);
    return 1;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
