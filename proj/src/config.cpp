#include "damageid/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace damageid {

namespace {

const std::vector<std::string> kKnownKeys = {
    "domain.dimension",    "domain.lx",           "domain.ly",
    "domain.nx",           "domain.ny",           "domain.left",
    "domain.right",        "domain.bottom",       "domain.top",
    "time.horizon",        "time.steps",          "material.young",
    "material.lambda",     "material.mu",         "material.alpha",
    "material.omega0",     "material.omega1",     "material.ybar",
    "mollifier.radius",    "mollifier.variant",   "process.t_cells",
    "process.x_cells",     "process.y_cells",     "process.y_splines",
    "process.gram_s",      "loads.body_x",        "loads.body_y",
    "loads.traction_x",    "loads.traction_y",    "forward.tolerance",
    "forward.max_sweeps",  "forward.lambda",      "inversion.step",
    "inversion.tau_disc",  "inversion.max_iters", "truth.kind",
    "truth.scale",         "experiment.seed",     "experiment.noise",
    "experiment.initial_fraction",                "experiment.output_dir",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cur = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, prev + (a[i - 1] == b[j - 1] ? 0 : 1)});
      prev = cur;
    }
  }
  return row[b.size()];
}

std::string nearest_key(const std::string& key) {
  std::string best = kKnownKeys.front();
  std::size_t best_d = edit_distance(key, best);
  for (const auto& k : kKnownKeys) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

using KeyMap = std::map<std::string, std::string>;

double get_double(const KeyMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + ": expected a number, got '" + it->second +
                                "'");
  }
  if (pos != it->second.size())
    throw std::invalid_argument("config: " + key + ": trailing characters in '" + it->second +
                                "'");
  return v;
}

long long get_int(const KeyMap& m, const std::string& key, long long fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  std::size_t pos = 0;
  long long v;
  try {
    v = std::stoll(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + ": expected an integer, got '" + it->second +
                                "'");
  }
  if (pos != it->second.size())
    throw std::invalid_argument("config: " + key + ": trailing characters in '" + it->second +
                                "'");
  return v;
}

std::string get_string(const KeyMap& m, const std::string& key, const std::string& fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

BoundaryKind parse_edge(const KeyMap& m, const std::string& key, BoundaryKind fallback) {
  const std::string v = get_string(m, key, "");
  if (v.empty()) return fallback;
  if (v == "clamped") return BoundaryKind::kClamped;
  if (v == "traction") return BoundaryKind::kTraction;
  throw std::invalid_argument("config: " + key + ": expected 'clamped' or 'traction', got '" +
                              v + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  KeyMap values;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      throw std::invalid_argument("config: unknown key '" + key + "' (did you mean '" +
                                  nearest_key(key) + "'?)");
    values[key] = trim(line.substr(eq + 1));
  }

  ExperimentConfig cfg;
  cfg.domain.dimension = static_cast<int>(get_int(values, "domain.dimension", 1));
  cfg.domain.lx = get_double(values, "domain.lx", 1.0);
  cfg.domain.ly = get_double(values, "domain.ly", 1.0);
  cfg.domain.nx = static_cast<int>(get_int(values, "domain.nx", 64));
  cfg.domain.ny = static_cast<int>(get_int(values, "domain.ny", 8));
  cfg.domain.edges[0] = parse_edge(values, "domain.left", BoundaryKind::kClamped);
  cfg.domain.edges[1] = parse_edge(values, "domain.right", BoundaryKind::kTraction);
  cfg.domain.edges[2] = parse_edge(values, "domain.bottom", BoundaryKind::kTraction);
  cfg.domain.edges[3] = parse_edge(values, "domain.top", BoundaryKind::kTraction);

  cfg.grid.horizon = get_double(values, "time.horizon", 1.0);
  cfg.grid.n_steps = static_cast<int>(get_int(values, "time.steps", 32));

  cfg.young = get_double(values, "material.young", 1.0);
  cfg.lame_lambda = get_double(values, "material.lambda", 1.0);
  cfg.lame_mu = get_double(values, "material.mu", 1.0);
  cfg.material.alpha = get_double(values, "material.alpha", 1.0);
  cfg.material.omega0 = get_double(values, "material.omega0", 0.0);
  cfg.material.omega1 = get_double(values, "material.omega1", 0.5);
  cfg.material.ybar = get_double(values, "material.ybar", 2.0);

  cfg.mollifier.radius = get_double(values, "mollifier.radius", 0.125);
  const std::string variant = get_string(values, "mollifier.variant", "difference");
  if (variant == "difference")
    cfg.mollifier.variant = MollifierSpec::Variant::kDifferenceQuotient;
  else if (variant == "average")
    cfg.mollifier.variant = MollifierSpec::Variant::kIndicatorAverage;
  else
    throw std::invalid_argument(
        "config: mollifier.variant: expected 'difference' or 'average', got '" + variant + "'");

  cfg.process_t_cells = static_cast<int>(get_int(values, "process.t_cells", 2));
  cfg.process_x_cells = static_cast<int>(get_int(values, "process.x_cells", 4));
  cfg.process_y_cells = static_cast<int>(get_int(values, "process.y_cells", 1));
  cfg.process_y_splines = static_cast<int>(get_int(values, "process.y_splines", 12));
  cfg.gram_s = get_double(values, "process.gram_s", cfg.domain.dimension == 2 ? 2.0 : 1.0);

  cfg.body_x = get_double(values, "loads.body_x", 2.0);
  cfg.body_y = get_double(values, "loads.body_y", 0.0);
  cfg.traction_x = get_double(values, "loads.traction_x", 1.0);
  cfg.traction_y = get_double(values, "loads.traction_y", 0.0);

  cfg.forward.tolerance = get_double(values, "forward.tolerance", 1e-10);
  cfg.forward.max_sweeps = static_cast<int>(get_int(values, "forward.max_sweeps", 100));
  cfg.forward.lambda = get_double(values, "forward.lambda", 8.0);

  cfg.landweber.step = get_double(values, "inversion.step", 0.0);
  cfg.landweber.tau_disc = get_double(values, "inversion.tau_disc", 1.5);
  cfg.landweber.max_iters = static_cast<int>(get_int(values, "inversion.max_iters", 500));

  cfg.truth_kind = get_string(values, "truth.kind", "quadratic");
  cfg.truth_scale = get_double(values, "truth.scale", 8.0);

  cfg.seed = static_cast<std::uint64_t>(get_int(values, "experiment.seed", 1));
  cfg.noise = get_double(values, "experiment.noise", 0.0);
  cfg.initial_fraction = get_double(values, "experiment.initial_fraction", 0.2);
  cfg.output_dir = get_string(values, "experiment.output_dir", ".");

  // invariant checks with key paths
  try {
    cfg.domain.validate();
  } catch (const std::invalid_argument& ex) {
    throw std::invalid_argument(std::string("config: ") + ex.what());
  }
  if (!(cfg.material.omega1 > cfg.material.omega0 || cfg.material.omega1 == cfg.material.omega0))
    throw std::invalid_argument("config: material.omega1 must be >= material.omega0");
  if (cfg.material.omega1 >= 1.0)
    throw std::invalid_argument("config: material.omega1 must be < 1");
  if (cfg.material.omega0 < 0.0)
    throw std::invalid_argument("config: material.omega0 must be >= 0");
  if (cfg.material.alpha < 1.0)
    throw std::invalid_argument("config: material.alpha must be >= 1");
  if (cfg.grid.horizon <= 0.0) throw std::invalid_argument("config: time.horizon must be > 0");
  if (cfg.grid.n_steps < 1) throw std::invalid_argument("config: time.steps must be >= 1");
  if (cfg.landweber.tau_disc <= 1.0)
    throw std::invalid_argument("config: inversion.tau_disc must be > 1");
  if (cfg.forward.tolerance <= 0.0)
    throw std::invalid_argument("config: forward.tolerance must be > 0");
  if (cfg.noise < 0.0) throw std::invalid_argument("config: experiment.noise must be >= 0");
  if (cfg.truth_kind != "quadratic" && cfg.truth_kind != "zero")
    throw std::invalid_argument("config: truth.kind must be 'quadratic' or 'zero'");
  cfg.material.horizon = cfg.grid.horizon;
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  const auto edge = [](BoundaryKind k) {
    return k == BoundaryKind::kClamped ? "clamped" : "traction";
  };
  out << "[domain]\n"
      << "dimension = " << cfg.domain.dimension << "\n"
      << "lx = " << cfg.domain.lx << "\nly = " << cfg.domain.ly << "\n"
      << "nx = " << cfg.domain.nx << "\nny = " << cfg.domain.ny << "\n"
      << "left = " << edge(cfg.domain.edges[0]) << "\nright = " << edge(cfg.domain.edges[1])
      << "\nbottom = " << edge(cfg.domain.edges[2]) << "\ntop = " << edge(cfg.domain.edges[3])
      << "\n\n[time]\nhorizon = " << cfg.grid.horizon << "\nsteps = " << cfg.grid.n_steps
      << "\n\n[material]\nyoung = " << cfg.young << "\nlambda = " << cfg.lame_lambda
      << "\nmu = " << cfg.lame_mu << "\nalpha = " << cfg.material.alpha
      << "\nomega0 = " << cfg.material.omega0 << "\nomega1 = " << cfg.material.omega1
      << "\nybar = " << cfg.material.ybar << "\n\n[mollifier]\nradius = " << cfg.mollifier.radius
      << "\nvariant = "
      << (cfg.mollifier.variant == MollifierSpec::Variant::kDifferenceQuotient ? "difference"
                                                                               : "average")
      << "\n\n[process]\nt_cells = " << cfg.process_t_cells
      << "\nx_cells = " << cfg.process_x_cells << "\ny_cells = " << cfg.process_y_cells
      << "\ny_splines = " << cfg.process_y_splines << "\ngram_s = " << cfg.gram_s
      << "\n\n[loads]\nbody_x = " << cfg.body_x << "\nbody_y = " << cfg.body_y
      << "\ntraction_x = " << cfg.traction_x << "\ntraction_y = " << cfg.traction_y
      << "\n\n[forward]\ntolerance = " << cfg.forward.tolerance
      << "\nmax_sweeps = " << cfg.forward.max_sweeps << "\nlambda = " << cfg.forward.lambda
      << "\n\n[inversion]\nstep = " << cfg.landweber.step
      << "\ntau_disc = " << cfg.landweber.tau_disc
      << "\nmax_iters = " << cfg.landweber.max_iters << "\n\n[truth]\nkind = " << cfg.truth_kind
      << "\nscale = " << cfg.truth_scale << "\n\n[experiment]\nseed = " << cfg.seed
      << "\nnoise = " << cfg.noise << "\ninitial_fraction = " << cfg.initial_fraction
      << "\noutput_dir = " << cfg.output_dir << "\n";
  return out.str();
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

MaterialModel ExperimentConfig::build_material() const {
  MaterialModel mat = material;
  const double e = young, la = lame_lambda, mu = lame_mu;
  mat.young = [e](double, double) { return e; };
  mat.lame_lambda = [la](double, double) { return la; };
  mat.lame_mu = [mu](double, double) { return mu; };
  mat.horizon = grid.horizon;
  return mat;
}

ProcessBasis ExperimentConfig::build_process_basis() const {
  ProcessBasis basis;
  basis.horizon = grid.horizon;
  basis.n_t = process_t_cells;
  basis.dim = domain.dimension;
  basis.lx = domain.lx;
  basis.ly = domain.ly;
  basis.nx_cells = process_x_cells;
  basis.ny_cells = process_y_cells;
  basis.ybasis = BSplineBasis(-material.ybar, material.ybar, process_y_splines);
  basis.validate();
  return basis;
}

Problem ExperimentConfig::build_problem() const {
  const Mesh mesh = build_mesh(domain);
  Eigen::MatrixXd body(mesh.n_nodes(), mesh.dim), traction(mesh.n_nodes(), mesh.dim);
  body.col(0).setConstant(body_x);
  traction.col(0).setConstant(traction_x);
  if (mesh.dim == 2) {
    body.col(1).setConstant(body_y);
    traction.col(1).setConstant(traction_y);
  }
  const Vec d0 = Vec::Constant(mesh.n_nodes(), material.omega0);
  return damageid::build_problem(domain, build_material(), grid, mollifier,
                                 constant_loads(grid, body, traction), d0);
}

DamageProcess ExperimentConfig::initial_process() const {
  DamageProcess p;
  p.basis = build_process_basis();
  p.g_max = build_material().g_max();
  p.coeffs = Vec::Constant(p.basis.size(), initial_fraction * p.g_max);
  return project_admissible(p);
}

DamageProcess ExperimentConfig::truth_process() const {
  DamageProcess p;
  p.basis = build_process_basis();
  p.g_max = build_material().g_max();
  p.coeffs = Vec::Zero(p.basis.size());
  if (truth_kind == "zero") return p;

  // least-squares spline fit of min(g_max, y^2 / scale), replicated over the
  // (t, x) cells, then projected into the admissible box
  const BSplineBasis& yb = p.basis.ybasis;
  const int n_samples = 40 * yb.size();
  Eigen::MatrixXd a(n_samples, yb.size());
  Vec b(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double y = yb.lo() + (yb.hi() - yb.lo()) * i / (n_samples - 1.0);
    a.row(i) = yb.eval(y).transpose();
    b(i) = std::min(p.g_max, y * y / truth_scale);
  }
  const Vec fit = a.colPivHouseholderQr().solve(b);
  for (int tc = 0; tc < p.basis.n_t; ++tc)
    for (int sc = 0; sc < p.basis.n_space(); ++sc)
      for (int j = 0; j < yb.size(); ++j) p.coeffs(p.basis.coeff_index(tc, sc, j)) = fit(j);
  return project_admissible(p);
}

}  // namespace damageid
