#include "lrsep/cli.hpp"

#include "lrsep/detect.hpp"
#include "lrsep/io.hpp"
#include "lrsep/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fs = std::filesystem;

namespace lrsep::cli {
namespace {

std::string fmt(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(to_double(item));
  return out;
}

std::string join_alphas(const std::vector<double>& alphas) {
  std::string s;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    s += (i ? "," : "") + fmt(alphas[i]);
  return s;
}

void write_solver(std::ostream& out, const std::string& prefix,
                  const SolverConfig& c) {
  out << prefix << "tau=" << fmt(c.tau) << '\n'
      << prefix << "lambda=" << fmt(c.lambda) << '\n'
      << prefix << "epsilon=" << fmt(c.epsilon) << '\n'
      << prefix << "rho0=" << fmt(c.rho0) << '\n'
      << prefix << "rho_growth=" << fmt(c.rho_growth) << '\n'
      << prefix << "inner_tol=" << fmt(c.inner_tol) << '\n'
      << prefix << "max_outer=" << c.max_outer << '\n'
      << prefix << "max_inner=" << c.max_inner << '\n'
      << prefix << "warm_start=" << (c.warm_start ? 1 : 0) << '\n';
}

bool read_solver_key(SolverConfig& c, const std::string& key,
                     const std::string& v) {
  if (key == "tau") c.tau = to_double(v);
  else if (key == "lambda") c.lambda = to_double(v);
  else if (key == "epsilon") c.epsilon = to_double(v);
  else if (key == "rho0") c.rho0 = to_double(v);
  else if (key == "rho_growth") c.rho_growth = to_double(v);
  else if (key == "inner_tol") c.inner_tol = to_double(v);
  else if (key == "max_outer") c.max_outer = static_cast<int>(to_long(v));
  else if (key == "max_inner") c.max_inner = static_cast<int>(to_long(v));
  else if (key == "warm_start") c.warm_start = to_long(v) != 0;
  else return false;
  return true;
}

ConvoyPreset parse_preset(const std::string& name) {
  if (name == "desk") return ConvoyPreset::desk;
  if (name == "paper-convoy") return ConvoyPreset::paper;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

/// Refuses to write any output that resolves to one of the inputs.
void guard_outputs(const std::vector<fs::path>& inputs,
                   const std::vector<fs::path>& outputs) {
  for (const auto& in : inputs) {
    if (in.empty() || !fs::exists(in)) continue;
    for (const auto& out : outputs)
      if (fs::exists(out) && fs::equivalent(in, out))
        throw std::invalid_argument("output " + out.string() +
                                    " would overwrite input " + in.string());
  }
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string("missing ") + what);
  if (!fs::is_regular_file(p))
    throw std::invalid_argument(std::string(what) + " not found: " + p.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_manifest(const ExperimentManifest& m) {
  write_text(m.output / "manifest.txt", m.to_text());
}

void write_separation(const fs::path& dir, const SeparationResult& r,
                      Index h, Index w) {
  const HsiCube background = unflatten(r.background, h, w);
  const HsiCube sparse = unflatten(r.sparse, h, w);
  write_hcube(dir / "L.hcube", background);
  write_hcube(dir / "S.hcube", sparse);
  write_hcube(dir / "N.hcube", unflatten(r.residual, h, w));
  write_matrix_csv(dir / "C.csv", r.coefficients);
  std::ofstream trace(dir / "trace.csv");
  write_trace_csv(trace, r.trace);
  write_matrix_csv(dir / "L_db.csv", mean_power_db(background));
  write_matrix_csv(dir / "S_db.csv", mean_power_db(sparse));
}

void write_detection(const fs::path& dir, const std::string& stem,
                     const DetectionMap& map) {
  write_scaled_pgm(dir / (stem + ".pgm"), map.scores);
  write_matrix_csv(dir / (stem + ".csv"), map.scores);
}

RocCurve write_roc(const fs::path& path, const DetectionMap& map,
                   const Mask& truth) {
  const RocCurve curve = roc(map, truth);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_roc_csv(out, curve);
  return curve;
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  std::string preset = "desk";
  double alpha = 0.5;
  std::uint64_t seed = 1;
  long bands = 0;
  long rank = 0;
  double sigma = -1.0;
  int dict_samples = 1;
  fs::path out = "synth_out";
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticSpec spec = convoy_spec(parse_preset(a.preset), 1.0, a.seed, a.bands);
  if (a.rank > 0) spec.rank = a.rank;
  if (a.sigma >= 0.0) spec.sigma = a.sigma;
  spec.alpha = a.alpha;
  if (a.dict_samples > 1) {
    const auto samples =
        generate_target_samples(spec.target, a.dict_samples, 0.02, a.seed);
    spec.target = mean_spectrum(samples);
    Matrix dict(spec.bands, a.dict_samples);
    for (int k = 0; k < a.dict_samples; ++k) dict.col(k) = samples[k];
    fs::create_directories(a.out);
    write_matrix_csv(a.out / "dictionary.csv", dict);
  }
  spec.validate();
  const Scene scene = make_scene(spec);

  fs::create_directories(a.out);
  write_hcube(a.out / "cube.hcube", scene.cube);
  write_matrix_csv(a.out / "target.csv", scene.target);
  if (a.dict_samples <= 1)
    write_matrix_csv(a.out / "dictionary.csv", scene.target);
  write_mask_pgm(a.out / "truth.pgm", scene.truth.mask);
  write_mask_csv(a.out / "truth.csv", scene.truth.mask);
  write_text(a.out / "spec.txt", spec.to_text());

  ExperimentManifest m;
  m.command = "synth";
  m.output = a.out;
  m.preset = a.preset;
  m.alphas = {a.alpha};
  m.seed = a.seed;
  write_manifest(m);

  out << "q=" << scene.truth.positives() << '\n';
  for (const char* f : {"cube.hcube", "target.csv", "dictionary.csv",
                        "truth.pgm", "truth.csv", "spec.txt"})
    out << (a.out / f).string() << '\n';
  return kSuccess;
}

int cmd_separate(ExperimentManifest m, std::ostream& out) {
  require_file(m.cube, "--cube");
  require_file(m.dictionary, "--dict");
  m.solver.validate();

  HsiCube cube = read_hcube(m.cube);
  TargetDictionary dict = load_target_dictionary(m.dictionary);
  const auto removed = parse_band_ranges(m.remove_bands);
  if (!removed.empty()) {
    const Index original_bands = cube.bands();
    cube = apply_band_mask(cube, removed);
    if (dict.bands() == original_bands) {
      const auto kept = kept_band_indices(original_bands, removed);
      dict = select_bands(dict, kept);
    }
  }
  if (m.normalize) {
    cube = normalize(cube);
    dict = TargetDictionary(normalize_values(dict.atoms()));
  }
  if (dict.bands() != cube.bands())
    throw std::invalid_argument(
        "cube has " + std::to_string(cube.bands()) +
        " bands but the dictionary has " + std::to_string(dict.bands()));

  fs::create_directories(m.output);
  guard_outputs({m.cube, m.dictionary},
                {m.output / "L.hcube", m.output / "S.hcube",
                 m.output / "N.hcube", m.output / "C.csv",
                 m.output / "trace.csv"});
  const SeparationResult r = separate(cube.pixels(), dict, m.solver);
  write_separation(m.output, r, cube.height(), cube.width());
  write_manifest(m);

  const auto& last = r.trace.back();
  out << (r.converged ? "converged" : "stopped at max_outer") << " after "
      << r.iterations << " iterations; objective=" << last.objective
      << " dL_rel=" << last.background_change
      << " dS_rel=" << last.sparse_change << '\n';
  return r.converged ? kSuccess : kNotConverged;
}

int cmd_detect(const ExperimentManifest& m, std::ostream& out) {
  DetectionMap map;
  std::vector<fs::path> inputs;
  if (m.strategy == "two") {
    require_file(m.sparse, "--sparse");
    const HsiCube sparse = read_hcube(m.sparse);
    map = strategy_two_scores(sparse.pixels(), sparse.height(), sparse.width());
    inputs = {m.sparse};
  } else {
    require_file(m.cube, "--cube");
    require_file(m.dictionary, "--dict");
    const HsiCube original = read_hcube(m.cube);
    HsiCube background = original;
    if (!m.baseline) {
      require_file(m.background, "--background");
      background = read_hcube(m.background);
    }
    const TargetDictionary dict = load_target_dictionary(m.dictionary);
    SrbbhParams params{m.window, m.background_sparsity, m.union_sparsity};
    map = strategy_one_detect(original, background, dict, params,
                              thread_budget());
    inputs = {m.cube, m.background, m.dictionary};
  }
  if (!m.truth.empty()) require_file(m.truth, "--truth");
  inputs.push_back(m.truth);

  fs::create_directories(m.output);
  guard_outputs(inputs, {m.output / "scores.pgm", m.output / "scores.csv",
                         m.output / "roc.csv"});
  write_detection(m.output, "scores", map);
  if (!m.truth.empty()) {
    const RocCurve curve = write_roc(m.output / "roc.csv", map, read_mask(m.truth));
    out << "auc=" << curve.auc << '\n';
  }
  write_manifest(m);
  out << (m.output / "scores.pgm").string() << '\n'
      << (m.output / "scores.csv").string() << '\n';
  return kSuccess;
}

struct SweepRow {
  double alpha = 0.0;
  double auc_one_background = 0.0;
  double auc_one_original = 0.0;
  double auc_two = 0.0;
  bool converged = true;
};

SweepRow run_sweep_case(const ExperimentManifest& m, double alpha) {
  const SyntheticSpec spec = convoy_spec(parse_preset(m.preset), alpha, m.seed);
  const Scene scene = make_scene(spec);
  const Index h = scene.cube.height();
  const Index w = scene.cube.width();
  const TargetDictionary dict(scene.target);

  const fs::path dir = m.output / ("alpha_" + fmt(alpha));
  fs::create_directories(dir);
  write_hcube(dir / "cube.hcube", scene.cube);
  write_matrix_csv(dir / "dictionary.csv", scene.target);
  write_mask_pgm(dir / "truth.pgm", scene.truth.mask);
  write_text(dir / "spec.txt", spec.to_text());

  SweepRow row;
  row.alpha = alpha;

  const SeparationResult one = separate(scene.cube.pixels(), dict, m.solver);
  fs::create_directories(dir / "strategy_one");
  write_separation(dir / "strategy_one", one, h, w);
  const SrbbhParams params{m.window, m.background_sparsity, m.union_sparsity};
  const auto map_l = strategy_one_detect(scene.cube, unflatten(one.background, h, w),
                                         dict, params);
  const auto map_d = strategy_one_detect(scene.cube, scene.cube, dict, params);
  write_detection(dir, "scores_one_L", map_l);
  write_detection(dir, "scores_one_D", map_d);
  row.auc_one_background =
      write_roc(dir / "roc_one_L.csv", map_l, scene.truth.mask).auc;
  row.auc_one_original =
      write_roc(dir / "roc_one_D.csv", map_d, scene.truth.mask).auc;

  const SeparationResult two =
      separate(scene.cube.pixels(), dict, m.detection_solver);
  fs::create_directories(dir / "strategy_two");
  write_separation(dir / "strategy_two", two, h, w);
  const auto map_s = strategy_two_scores(two.sparse, h, w);
  write_detection(dir, "scores_two", map_s);
  row.auc_two = write_roc(dir / "roc_two.csv", map_s, scene.truth.mask).auc;

  row.converged = one.converged && two.converged;
  return row;
}

int cmd_eval_sweep(ExperimentManifest m, std::ostream& out) {
  if (m.alphas.empty()) throw std::invalid_argument("empty alpha list");
  for (double a : m.alphas)
    if (!(a > 0.0 && a <= 1.0))
      throw std::invalid_argument("alpha " + fmt(a) + " outside (0, 1]");
  parse_preset(m.preset);
  m.solver.validate();
  m.detection_solver.validate();
  fs::create_directories(m.output);

  std::vector<SweepRow> rows(m.alphas.size());
  std::vector<std::string> errors(m.alphas.size());
  std::size_t next = 0;
  std::mutex lock;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::scoped_lock guard(lock);
        if (next >= m.alphas.size()) return;
        i = next++;
      }
      try {
        rows[i] = run_sweep_case(m, m.alphas[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned workers = std::min<unsigned>(
      thread_budget(), static_cast<unsigned>(m.alphas.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);

  std::ostringstream summary;
  summary << "alpha,auc_strategy1_L,auc_strategy1_D_baseline,auc_strategy2\n";
  bool converged = true;
  for (const auto& r : rows) {
    summary << fmt(r.alpha) << ',' << fmt(r.auc_one_background) << ','
            << fmt(r.auc_one_original) << ',' << fmt(r.auc_two) << '\n';
    converged = converged && r.converged;
  }
  write_text(m.output / "summary.csv", summary.str());
  write_manifest(m);
  out << summary.str();
  return converged ? kSuccess : kNotConverged;
}

int cmd_info(const fs::path& path, std::ostream& out) {
  require_file(path, "cube");
  const HsiCube cube = read_hcube(path);
  out << "height=" << cube.height() << "\nwidth=" << cube.width()
      << "\nbands=" << cube.bands() << "\npixels=" << cube.pixel_count()
      << "\nmin=" << cube.pixels().minCoeff()
      << "\nmax=" << cube.pixels().maxCoeff() << '\n';
  return kSuccess;
}

void add_solver_options(CLI::App* app, SolverConfig& c, std::string& strategy,
                        std::optional<double>& tau,
                        std::optional<double>& lambda) {
  app->add_option("--strategy", strategy,
                  "Parameter preset: one (tau 0.8, lambda 0.133) or two "
                  "(tau 0.05, lambda 0.02)")
      ->check(CLI::IsMember({"one", "two"}));
  app->add_option("--tau", tau, "Nuclear-norm weight");
  app->add_option("--lambda", lambda, "l2,1 weight");
  app->add_option("--epsilon", c.epsilon, "Outer relative-change tolerance");
  app->add_option("--rho0", c.rho0, "Initial ADMM penalty");
  app->add_option("--rho-growth", c.rho_growth, "ADMM penalty growth factor");
  app->add_option("--inner-tol", c.inner_tol, "ADMM tolerance");
  app->add_option("--max-outer", c.max_outer, "Outer iteration cap");
  app->add_option("--max-inner", c.max_inner, "ADMM iteration cap");
  app->add_flag("--warm-start", c.warm_start,
                "Carry ADMM state across outer iterations");
}

/// Fills tau/lambda from the strategy preset unless given explicitly.
void resolve_weights(SolverConfig& c, const std::string& strategy,
                     std::optional<double> tau, std::optional<double> lambda) {
  const SolverConfig preset = strategy == "two"
                                  ? SolverConfig::sparse_detection()
                                  : SolverConfig::background_recovery();
  c.tau = tau.value_or(preset.tau);
  c.lambda = lambda.value_or(preset.lambda);
}

}  // namespace

std::string ExperimentManifest::to_text() const {
  std::ostringstream out;
  out << "command=" << command << '\n'
      << "cube=" << cube.string() << '\n'
      << "dictionary=" << dictionary.string() << '\n'
      << "background=" << background.string() << '\n'
      << "sparse=" << sparse.string() << '\n'
      << "truth=" << truth.string() << '\n'
      << "output=" << output.string() << '\n'
      << "strategy=" << strategy << '\n';
  write_solver(out, "", solver);
  write_solver(out, "detection.", detection_solver);
  out << "window=" << window << '\n'
      << "background_sparsity=" << background_sparsity << '\n'
      << "union_sparsity=" << union_sparsity << '\n'
      << "remove_bands=" << remove_bands << '\n'
      << "normalize=" << (normalize ? 1 : 0) << '\n'
      << "baseline=" << (baseline ? 1 : 0) << '\n'
      << "preset=" << preset << '\n'
      << "alphas=" << join_alphas(alphas) << '\n'
      << "seed=" << seed << '\n';
  return out.str();
}

ExperimentManifest ExperimentManifest::from_text(const std::string& text) {
  ExperimentManifest m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("manifest line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string v = line.substr(eq + 1);
    if (key == "command") m.command = v;
    else if (key == "cube") m.cube = v;
    else if (key == "dictionary") m.dictionary = v;
    else if (key == "background") m.background = v;
    else if (key == "sparse") m.sparse = v;
    else if (key == "truth") m.truth = v;
    else if (key == "output") m.output = v;
    else if (key == "strategy") m.strategy = v;
    else if (key == "window") m.window = static_cast<int>(to_long(v));
    else if (key == "background_sparsity") m.background_sparsity = to_long(v);
    else if (key == "union_sparsity") m.union_sparsity = to_long(v);
    else if (key == "remove_bands") m.remove_bands = v;
    else if (key == "normalize") m.normalize = to_long(v) != 0;
    else if (key == "baseline") m.baseline = to_long(v) != 0;
    else if (key == "preset") m.preset = v;
    else if (key == "alphas") m.alphas = parse_alpha_list(v);
    else if (key == "seed") m.seed = static_cast<std::uint64_t>(to_long(v));
    else if (key.starts_with("detection.") &&
             read_solver_key(m.detection_solver, key.substr(10), v)) {
    } else if (!read_solver_key(m.solver, key, v)) {
      throw std::invalid_argument("unknown manifest key '" + key + "'");
    }
  }
  return m;
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LRSEP_THREADS")) {
    try {
      const long cap = to_long(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::invalid_argument&) {
    }
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Low-rank background / sparse target separation for "
               "hyperspectral images"};
  app.name("lrsep");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a convoy scene");
  synth_cmd->add_option("--preset", synth.preset, "desk or paper-convoy")
      ->check(CLI::IsMember({"desk", "paper-convoy"}));
  synth_cmd->add_option("--alpha", synth.alpha, "Fill fraction in (0, 1]");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--bands", synth.bands, "Override band count");
  synth_cmd->add_option("--rank", synth.rank, "Override background rank");
  synth_cmd->add_option("--sigma", synth.sigma, "Override noise sigma");
  synth_cmd->add_option("--dict-samples", synth.dict_samples,
                        "Target samples in the dictionary (target = mean)");
  synth_cmd->add_option("--out", synth.out, "Output directory");

  ExperimentManifest sep;
  std::optional<double> sep_tau, sep_lambda;
  auto* sep_cmd = app.add_subcommand("separate", "Split a cube into L + S + N");
  sep_cmd->add_option("--cube", sep.cube, "Input HCUBE")->required();
  sep_cmd->add_option("--dict", sep.dictionary, "Target dictionary CSV")
      ->required();
  add_solver_options(sep_cmd, sep.solver, sep.strategy, sep_tau, sep_lambda);
  sep_cmd->add_option("--remove-bands", sep.remove_bands,
                      "1-based band ranges to drop, e.g. 1-4,104-113,148-167");
  sep_cmd->add_flag("--normalize", sep.normalize,
                    "Scale cube and dictionary to [0, 1] after band removal");
  sep_cmd->add_option("--out", sep.output, "Output directory")->required();

  ExperimentManifest det;
  auto* det_cmd = app.add_subcommand("detect", "Score pixels");
  det_cmd->add_option("--strategy", det.strategy, "one or two")
      ->required()
      ->check(CLI::IsMember({"one", "two"}));
  det_cmd->add_option("--sparse", det.sparse, "S cube (strategy two)");
  det_cmd->add_option("--cube", det.cube, "Original cube (strategy one)");
  det_cmd->add_option("--background", det.background,
                      "Background cube L (strategy one)");
  det_cmd->add_option("--dict", det.dictionary, "Target dictionary CSV");
  det_cmd->add_option("--m", det.window, "Window size (odd)");
  det_cmd->add_option("--kb", det.background_sparsity, "OMP atoms under H0");
  det_cmd->add_option("--kbt", det.union_sparsity, "OMP atoms under H1");
  det_cmd->add_flag("--baseline", det.baseline,
                    "Build the background dictionary from the original cube");
  det_cmd->add_option("--truth", det.truth, "Truth mask (.pgm or .csv)");
  det_cmd->add_option("--out", det.output, "Output directory")->required();

  ExperimentManifest sweep;
  fs::path sweep_manifest;
  std::string sweep_alphas;
  std::string sweep_preset;
  std::uint64_t sweep_seed = 0;
  fs::path sweep_out;
  auto* sweep_cmd =
      app.add_subcommand("eval-sweep", "synth -> separate -> detect per alpha");
  sweep_cmd->add_option("--manifest", sweep_manifest, "key=value manifest");
  sweep_cmd->add_option("--preset", sweep_preset, "desk or paper-convoy");
  sweep_cmd->add_option("--alphas", sweep_alphas, "Comma-separated list");
  sweep_cmd->add_option("--seed", sweep_seed, "Scene seed");
  sweep_cmd->add_option("--out", sweep_out, "Output directory");

  fs::path info_path;
  auto* info_cmd = app.add_subcommand("info", "Print an HCUBE header");
  info_cmd->add_option("cube", info_path, "HCUBE file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (synth_cmd->parsed()) {
      if (!(synth.alpha > 0.0 && synth.alpha <= 1.0))
        throw std::invalid_argument("--alpha must lie in (0, 1]");
      return cmd_synth(synth, out);
    }
    if (sep_cmd->parsed()) {
      sep.command = "separate";
      resolve_weights(sep.solver, sep.strategy, sep_tau, sep_lambda);
      return cmd_separate(sep, out);
    }
    if (det_cmd->parsed()) {
      det.command = "detect";
      return cmd_detect(det, out);
    }
    if (sweep_cmd->parsed()) {
      if (!sweep_manifest.empty()) {
        require_file(sweep_manifest, "--manifest");
        std::ifstream in(sweep_manifest);
        std::stringstream buf;
        buf << in.rdbuf();
        sweep = ExperimentManifest::from_text(buf.str());
      } else {
        sweep.alphas = kConvoyAlphas;
        sweep.output = "sweep_out";
      }
      sweep.command = "eval-sweep";
      if (!sweep_preset.empty()) sweep.preset = sweep_preset;
      if (!sweep_alphas.empty()) sweep.alphas = parse_alpha_list(sweep_alphas);
      if (sweep_seed) sweep.seed = sweep_seed;
      if (!sweep_out.empty()) sweep.output = sweep_out;
      if (sweep.output.empty()) throw std::invalid_argument("missing --out");
      return cmd_eval_sweep(sweep, out);
    }
    if (info_cmd->parsed()) return cmd_info(info_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace lrsep::cli
