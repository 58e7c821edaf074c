#include "riesz_cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/estimator.hpp"
#include "riesz/generators.hpp"
#include "riesz/measures.hpp"
#include "riesz/parallel.hpp"
#include "riesz/sets.hpp"
#include "riesz/stats.hpp"
#include "riesz_cli/serialization.hpp"

namespace riesz::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  unsigned threads = 0;
  std::size_t max_points = SizeCaps{}.max_points;
  double max_pairs = SizeCaps{}.max_pairs;

  SizeCaps caps() const { return {max_points, max_pairs}; }
};

// Where a point set comes from: a CSV file or one of the generators.
struct SourceOpts {
  std::string input;
  std::string gen;
  std::size_t n = 0;
  std::size_t d = 1;
  std::size_t k = 0;
  std::size_t level = 0;
  std::size_t m = 2;
  std::vector<std::size_t> kept;
  std::string spec;
  std::size_t phases = 0;
  std::size_t per_phase = 0;
  double seq_s = 0.0;
  std::vector<double> targets;
  double tolerance = 1e-9;
  std::string measure;
  double t = 0.0;
  std::size_t count = 0;
  std::uint64_t seed = 1;
};

struct MeasureOpts {
  std::string measure = "uniform-cube";
  std::size_t d = 1;
  double t = 0.0;
  std::string input;
};

struct Outputs {
  std::string output;
  std::string json_path;
  std::string csv;
};

struct Source {
  PointCloud cloud;
  std::string kind;
  std::optional<CantorSpec> cantor;
  std::optional<EnergySequence> sequence;
  std::vector<std::size_t> lattice_levels;
};

void add_source_options(CLI::App* app, SourceOpts& o, bool with_seed) {
  auto* group = app->add_option_group("point source", "Exactly one of --input or --gen");
  group->add_option("--input", o.input, "CSV point file (optional first line '# dim=<d>')");
  group->add_option("--gen", o.gen, "Generator")
      ->check(CLI::IsMember({"grid", "lattice", "cantor", "semicircle", "energy-sequence", "sample"}));
  group->require_option(1);
  app->add_option("--n", o.n, "grid: point count; cantor: sub-intervals per factor");
  app->add_option("--d", o.d, "Ambient dimension (lattice, cantor factors, energy-sequence, sample)")
      ->check(CLI::PositiveNumber);
  app->add_option("--k", o.k, "lattice: refinement level 2^-k");
  app->add_option("--level", o.level, "cantor: construction level");
  app->add_option("--m", o.m, "cantor: kept sub-intervals per factor");
  app->add_option("--kept", o.kept, "cantor: kept interval indices")->delimiter(',');
  app->add_option("--spec", o.spec, "JSON CantorSpec or EnergyTargetSpec (inline or file)");
  app->add_option("--phases", o.phases, "semicircle: number of phases");
  app->add_option("--per-phase", o.per_phase, "semicircle: points per phase (even)");
  app->add_option("--seq-s", o.seq_s, "energy-sequence: exponent");
  app->add_option("--targets", o.targets, "energy-sequence: target energies")->delimiter(',');
  app->add_option("--tolerance", o.tolerance, "energy-sequence: relative tolerance");
  app->add_option("--measure", o.measure, "sample: measure name or JSON MeasureSpec");
  app->add_option("--t", o.t, "sample: semicircle phase");
  app->add_option("--count", o.count, "sample: number of draws");
  if (with_seed) app->add_option("--seed", o.seed, "sample: master seed");
}

void add_measure_options(CLI::App* app, MeasureOpts& o) {
  app->add_option("--measure", o.measure,
                  "uniform-cube | uniform-circle | semicircle | cantor:M:N | empirical | JSON MeasureSpec")
      ->capture_default_str();
  app->add_option("--d", o.d, "Dimension of uniform-cube, or factor count of cantor")->capture_default_str();
  app->add_option("--t", o.t, "Phase of the semicircle measure")->capture_default_str();
  app->add_option("--input", o.input, "CSV points for the empirical measure");
}

void add_outputs(CLI::App* app, Outputs& o, bool csv_primary, const char* csv_help) {
  app->add_option("--output", o.output,
                  csv_primary ? "CSV output path (default stdout)" : "JSON result path (default stdout)");
  if (csv_primary) app->add_option("--json", o.json_path, "JSON result path");
  if (csv_help != nullptr) app->add_option("--csv", o.csv, csv_help);
}

std::size_t require_set(std::size_t value, const char* flag, const std::string& gen) {
  if (value == 0) throw UsageError(std::string(flag) + " is required for --gen " + gen);
  return value;
}

MeasureSpec parse_measure(const std::string& text, std::size_t d, double t, const std::string& input) {
  if (!text.empty() && (text.front() == '{' || text.ends_with(".json"))) return measure_from_json(load_json_argument(text));
  if (text == "uniform-cube") return UniformCube{d};
  if (text == "uniform-circle") return UniformCircle{};
  if (text == "semicircle") return RotatingSemicircle{t};
  if (text == "empirical") {
    if (input.empty()) throw UsageError("--input is required for --measure empirical");
    return Empirical{read_points_csv_file(input)};
  }
  if (text.starts_with("cantor:")) {
    std::size_t m = 0, n = 0;
    char sep = 0;
    std::istringstream in(text.substr(7));
    if (!(in >> m >> sep >> n) || sep != ':') throw UsageError("--measure cantor expects cantor:M:N");
    CantorProduct c;
    for (std::size_t a = 0; a < d; ++a) c.factors.push_back(make_cantor_factor(m, n));
    return c;
  }
  throw UsageError("--measure: unknown measure '" + text + "'");
}

void check_pairs(std::size_t n, const GlobalOpts& g) {
  require(n <= g.max_points, ErrorKind::SizeCapExceeded,
          std::to_string(n) + " points exceed the cap " + std::to_string(g.max_points) + " (--max-points)");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - (n > 0 ? 1 : 0)) / 2.0;
  require(pairs <= g.max_pairs, ErrorKind::SizeCapExceeded,
          format_double(pairs) + " pairs exceed the cap " + format_double(g.max_pairs) + " (--max-pairs)");
}

CantorSpec cantor_from_opts(const SourceOpts& o) {
  if (!o.spec.empty()) return cantor_spec_from_json(load_json_argument(o.spec));
  CantorSpec spec;
  const std::size_t n = require_set(o.n, "--n", "cantor");
  const CantorFactor f{o.m, n, o.kept.empty() ? default_kept(o.m, n) : o.kept};
  spec.factors.assign(o.d, f);
  spec.level = require_set(o.level, "--level", "cantor");
  validate(spec);
  return spec;
}

EnergyTargetSpec sequence_from_opts(const SourceOpts& o) {
  if (!o.spec.empty()) return energy_target_spec_from_json(load_json_argument(o.spec));
  if (o.targets.empty()) throw UsageError("--targets or --spec is required for --gen energy-sequence");
  if (o.seq_s <= 0.0) throw UsageError("--seq-s is required for --gen energy-sequence");
  return {o.seq_s, o.targets, o.tolerance};
}

Source load_source(const SourceOpts& o, const GlobalOpts& g) {
  const SizeCaps caps = g.caps();
  if (!o.input.empty()) {
    Source src{read_points_csv_file(o.input), "input", {}, {}, {}};
    require(src.cloud.size() <= caps.max_points, ErrorKind::SizeCapExceeded, "input exceeds --max-points");
    return src;
  }
  const std::string& gen = o.gen;
  if (gen == "grid") {
    const std::size_t n = require_set(o.n, "--n", gen);
    require(n <= caps.max_points, ErrorKind::SizeCapExceeded, "grid exceeds --max-points");
    return {grid_1d(n), gen, {}, {}, {}};
  }
  if (gen == "lattice") {
    const std::size_t k = require_set(o.k, "--k", gen);
    Source src{lattice(o.d, k, caps), gen, {}, {}, {}};
    for (std::size_t j = 1; j <= k; ++j) src.lattice_levels.push_back(std::size_t{1} << (j * o.d));
    return src;
  }
  if (gen == "cantor") {
    const CantorSpec spec = cantor_from_opts(o);
    return {cantor_points(spec, caps), gen, spec, {}, {}};
  }
  if (gen == "semicircle") {
    return {semicircle_phase_points(require_set(o.phases, "--phases", gen), require_set(o.per_phase, "--per-phase", gen)),
            gen, {}, {}, {}};
  }
  if (gen == "energy-sequence") {
    EnergySequence seq = energy_sequence_points(sequence_from_opts(o), o.d);
    PointCloud cloud = seq.cloud;
    return {std::move(cloud), gen, {}, std::move(seq), {}};
  }
  const std::size_t count = require_set(o.count, "--count", gen);
  require(count <= caps.max_points, ErrorKind::SizeCapExceeded, "sample exceeds --max-points");
  const MeasureSpec m = parse_measure(o.measure.empty() ? "uniform-cube" : o.measure, o.d, o.t, "");
  return {sample(m, count, o.seed).cloud, gen, {}, {}, {}};
}

json source_payload(const Source& src) {
  json j = {{"kind", src.kind}, {"points", src.cloud.size()}, {"dim", src.cloud.dim()}};
  if (src.cantor) {
    j["cantor_spec"] = to_json(*src.cantor);
    j["dimension"] = number(cantor_dimension(*src.cantor));
  }
  if (src.sequence) j["sequence"] = to_json(*src.sequence);
  return j;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  while (std::getline(in, item, sep)) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + text + "' as a number list");
    }
  }
  if (sep == ':') {
    if (parts.size() != 3) throw UsageError("range '" + text + "' must be lo:hi:step");
    return exponent_grid(parts[0], parts[1], parts[2]);
  }
  return parts;
}

std::ofstream open_output(const std::string& path) {
  const std::string resolved = resolve_output_path(path);
  std::ofstream out(resolved);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot write " + resolved);
  return out;
}

void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) {
    writer(fallback);
    return;
  }
  std::ofstream file = open_output(path);
  writer(file);
}

json echo_options(const CLI::App* app) {
  json args = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "help-all") continue;
    if (opt->get_type_size() == 0) {
      args[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) args[name] = results.front();
      else args[name] = results;
    } else if (!opt->get_default_str().empty()) {
      args[name] = opt->get_default_str();
    }
  }
  for (const CLI::App* group : app->get_subcommands({})) {
    if (!group->get_name().empty()) continue;
    const json nested = echo_options(group);
    for (const auto& [key, value] : nested.items()) args[key] = value;
  }
  return args;
}

void write_envelope(std::ostream& out, const json& config, double seconds, json payload) {
  ResultEnvelope env;
  env.config = config;
  env.timing = {{"seconds", seconds}};
  env.payload = std::move(payload);
  out << to_json(env).dump(2) << '\n';
}

}  // namespace

std::string resolve_output_path(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* base = std::getenv(kOutputDirEnv); base != nullptr && *base != '\0') p = fs::path(base) / p;
  }
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  return p.string();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Riesz energies, dimension estimates, Monte Carlo laws of large numbers and distance sets"};
  app.name("riesz");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  GlobalOpts global;
  app.add_option("--threads", global.threads, "Worker thread bound (0 = hardware); results do not depend on it")
      ->capture_default_str();
  app.add_option("--max-points", global.max_points, "Largest point count accepted")->capture_default_str();
  app.add_option("--max-pairs", global.max_pairs, "Largest pair count accepted")->capture_default_str();

  SourceOpts src;
  MeasureOpts meas;
  Outputs outs;
  std::vector<std::string> s_list;
  std::vector<std::size_t> n_grid;
  std::string s_range;
  double s = 0.5, tau = 0.1, eps = 0.1, c = 1.0, step = 0.0;
  std::size_t n = 0, reps = 0, n_max = 0, values_limit = 100'000, mc_samples = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<double> at, s0;
  double radius = 0.0;
  bool waive = false, no_exact = false, allow_mc = false, include_path = false;
  std::string window;

  auto* gen = app.add_subcommand("gen", "Emit a generated point sequence as CSV");
  add_source_options(gen, src, true);
  add_outputs(gen, outs, true, nullptr);

  auto* energy = app.add_subcommand("energy", "Normalised discrete Riesz energy J_s of a point set or its prefixes");
  add_source_options(energy, src, true);
  energy->add_option("--s", s_list, "Exponents (comma separated)")->required()->delimiter(',');
  energy->add_option("--n-grid", n_grid, "Prefix sizes for an energy profile")->delimiter(',');
  energy->add_option("--at", at, "Evaluate the discrete potential at this point")->delimiter(',');
  energy->add_option("--radius", radius, "Also evaluate the truncated-kernel energy at this radius");
  add_outputs(energy, outs, false, nullptr);

  auto* dim = app.add_subcommand("dim", "Estimate dimension as the largest exponent with bounded prefix energies");
  add_source_options(dim, src, true);
  dim->add_option("--s-grid", s_range, "Exponents as lo:hi:step or a comma list (default 0.05:d:0.05)");
  dim->add_option("--n-grid", n_grid, "Prefix sizes (default: level sizes or a geometric grid)")->delimiter(',');
  dim->add_option("--tau", tau, "Slope threshold in (0, 0.2]")->capture_default_str();
  dim->add_option("--window", window, "Fit window n_lo:n_hi (default: top half of the n-grid)");
  add_outputs(dim, outs, false, nullptr);

  auto* varscan = app.add_subcommand("varscan", "Dispersion score max/median of J_s over replicates, per exponent");
  add_measure_options(varscan, meas);
  varscan->add_option("--s-grid", s_range, "Exponents as lo:hi:step or a comma list")->required();
  varscan->add_option("--n", n, "Points per replicate")->required();
  varscan->add_option("--reps", reps, "Replicates (>= 50)")->required();
  varscan->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_outputs(varscan, outs, true, nullptr);

  auto* samp = app.add_subcommand("sample", "Draw IID points from a reference measure as CSV");
  add_measure_options(samp, meas);
  samp->add_option("--count", n, "Number of draws")->required();
  samp->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_outputs(samp, outs, true, nullptr);

  auto* mean = app.add_subcommand("lln-mean", "Mean and standard error of J_s over replicates against I_s");
  add_measure_options(mean, meas);
  mean->add_option("--s", s, "Exponent")->required();
  mean->add_option("--n", n, "Points per replicate")->required();
  mean->add_option("--reps", reps, "Replicates (>= 30)")->required();
  mean->add_option("--seed", seed, "Master seed")->capture_default_str();
  mean->add_flag("--waive-oracle", waive, "Report without a reference energy");
  add_outputs(mean, outs, false, "CSV of per-replicate energies");

  auto* weak = app.add_subcommand("lln-weak", "Frequency of |J_s - I_s| > eps over replicates, per n");
  add_measure_options(weak, meas);
  weak->add_option("--s", s, "Exponent")->required();
  weak->add_option("--eps", eps, "Deviation threshold")->required();
  weak->add_option("--n-grid", n_grid, "Ascending sample sizes (>= 3 values)")->required()->delimiter(',');
  weak->add_option("--reps", reps, "Replicates per n")->required();
  weak->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_outputs(weak, outs, false, "CSV of per-replicate energies (n, rep, J)");

  auto* path = app.add_subcommand("lln-path", "Running J_s along one growing IID sample");
  add_measure_options(path, meas);
  path->add_option("--s", s, "Exponent")->required();
  path->add_option("--n-max", n_max, "Final sample size (>= 100)")->required();
  path->add_option("--seed", seed, "Master seed")->capture_default_str();
  path->add_flag("--include-path", include_path, "Embed the full path in the JSON payload");
  add_outputs(path, outs, false, "CSV of the path (n, J)");

  auto* ball = app.add_subcommand("ballcheck", "Energy of the ball measure: numeric integration vs the closed prediction");
  add_source_options(ball, src, true);
  ball->add_option("--s", s, "Exponent in (0, d)")->required();
  ball->add_option("--c", c, "Radius scale; balls have radius c n^(-1/s)")->capture_default_str();
  ball->add_flag("--allow-mc", allow_mc, "Permit Monte Carlo (required for d >= 3)");
  ball->add_option("--mc-samples", mc_samples, "Monte Carlo sample count")->capture_default_str();
  add_outputs(ball, outs, false, nullptr);

  auto* dist = app.add_subcommand("distset", "Distinct pairwise distances");
  add_source_options(dist, src, true);
  auto* dot = app.add_subcommand("dotset", "Distinct pairwise dot products, including x.x");
  add_source_options(dot, src, true);
  for (auto* sub : {dist, dot}) {
    sub->add_option("--step", step, "Quantization step (default 1e-9 x scale)");
    sub->add_flag("--no-exact", no_exact, "Skip exact integer-lattice detection");
    sub->add_option("--values-limit", values_limit, "Omit values above this count")->capture_default_str();
    add_outputs(sub, outs, false, nullptr);
  }

  auto* erdos = app.add_subcommand("erdos", "Distance count against the growth rates n^(1/s0)");
  add_source_options(erdos, src, true);
  erdos->add_option("--s0", s0, "Exponents (default: d/2 and the dimension-specific rate)")->delimiter(',');
  erdos->add_option("--step", step, "Quantization step");
  erdos->add_flag("--no-exact", no_exact, "Skip exact integer-lattice detection");
  add_outputs(erdos, outs, true, nullptr);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsageError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  json config = {{"subcommand", sub->get_name()}, {"global", echo_options(&app)}, {"args", echo_options(sub)}};
  config["global"].erase("version");
  const std::string name = sub->get_name();

  try {
    set_max_threads(global.threads);
    auto measure = [&] { return parse_measure(meas.measure, meas.d, meas.t, meas.input); };
    auto json_out = [&](json payload) {
      emit(outs.output, out, [&](std::ostream& o) { write_envelope(o, config, elapsed(), std::move(payload)); });
    };
    auto side_json = [&](json payload) {
      if (outs.json_path.empty()) return;
      std::ofstream o = open_output(outs.json_path);
      write_envelope(o, config, elapsed(), std::move(payload));
    };

    if (name == "gen") {
      const Source source = load_source(src, global);
      emit(outs.output, out, [&](std::ostream& o) { write_points_csv(o, source.cloud); });
      side_json(source_payload(source));
    } else if (name == "energy") {
      const Source source = load_source(src, global);
      check_pairs(source.cloud.size(), global);
      std::vector<double> exps;
      for (const auto& text : s_list) exps.push_back(parse_range(text).front());
      std::sort(exps.begin(), exps.end());
      json payload = source_payload(source);
      payload["s"] = json::array();
      for (double e : exps) payload["s"].push_back(number(e));
      const auto energies = discrete_energies(source.cloud, exps);
      payload["J"] = json::array();
      for (double e : energies) payload["J"].push_back(number(e));
      if (!n_grid.empty()) payload["profile"] = to_json(energy_profile(source.cloud, exps, n_grid));
      if (!at.empty()) {
        json pot = json::array();
        for (double e : exps) pot.push_back(number(riesz_potential_discrete(source.cloud, at, e)));
        payload["potential"] = {{"x", at}, {"values", pot}};
      }
      if (radius > 0.0) {
        json tr = json::array();
        for (double e : exps) tr.push_back(number(truncated_energy(source.cloud, e, radius)));
        payload["truncated"] = {{"radius", number(radius)}, {"values", tr}};
      }
      json_out(std::move(payload));
    } else if (name == "dim") {
      const Source source = load_source(src, global);
      const std::size_t N = source.cloud.size();
      const double ambient = static_cast<double>(source.cloud.dim());
      const std::vector<double> s_grid = s_range.empty() ? exponent_grid(0.05, ambient, 0.05) : parse_range(s_range);
      std::optional<FitWindow> fit;
      if (!window.empty()) {
        std::istringstream in(window);
        FitWindow w;
        char sep = 0;
        if (!(in >> w.n_lo >> sep >> w.n_hi) || sep != ':' || !in.eof()) throw UsageError("--window must be n_lo:n_hi");
        fit = w;
      }
      DimensionEstimate est;
      std::vector<std::size_t> grid = n_grid;
      if (source.kind == "grid") {
        if (grid.empty()) grid = geometric_grid(std::min<std::size_t>(8, N), N, 11);
        auto family = [](std::size_t m) { return grid_1d(m); };
        check_pairs(grid.back(), global);
        const EnergyProfile profile = energy_profile_family(family, s_grid, grid);
        est = dimension_estimate(profile, tau, family_evaluator(family, grid), fit);
      } else {
        if (grid.empty() && source.cantor) {
          for (std::size_t size : cantor_level_sizes(*source.cantor, global.caps()))
            if (size >= 2 && (grid.empty() || size > grid.back())) grid.push_back(size);
        }
        if (grid.empty() && !source.lattice_levels.empty()) grid = source.lattice_levels;
        if (grid.empty()) grid = geometric_grid(std::max<std::size_t>(2, N / 16), N, 9);
        check_pairs(grid.back(), global);
        est = dimension_estimate(source.cloud, s_grid, grid, tau, fit);
      }
      json payload = source_payload(source);
      payload["n_grid"] = grid;
      payload["estimate"] = to_json(est);
      json_out(std::move(payload));
    } else if (name == "varscan") {
      const MeasureSpec m = measure();
      check_pairs(n, global);
      const auto rows = variance_blowup_scan(m, parse_range(s_range), n, reps, seed);
      emit(outs.output, out, [&](std::ostream& o) {
        o << "s,score\n";
        for (const auto& r : rows) o << format_double(r.s) << ',' << format_double(r.score) << '\n';
      });
      json table = json::array();
      for (const auto& r : rows) table.push_back({{"s", number(r.s)}, {"score", number(r.score)}});
      side_json({{"measure", to_json(m)}, {"n", n}, {"reps", reps}, {"seed", seed}, {"rows", table}});
    } else if (name == "sample") {
      const MeasureSpec m = measure();
      require(n <= global.max_points, ErrorKind::SizeCapExceeded, "sample exceeds --max-points");
      const Sample draw = sample(m, n, seed);
      emit(outs.output, out, [&](std::ostream& o) { write_points_csv(o, draw.cloud); });
      side_json({{"measure", to_json(m)}, {"count", n}, {"seed", seed}, {"perturbed", draw.perturbed}});
    } else if (name == "lln-mean") {
      const MeasureSpec m = measure();
      check_pairs(n, global);
      const ExperimentReport report = expectation_experiment(m, s, n, reps, seed, waive);
      if (!outs.csv.empty()) {
        std::ofstream o = open_output(outs.csv);
        o << "rep,J\n";
        const auto& values = report.cells.front().values;
        for (std::size_t r = 0; r < values.size(); ++r) o << r << ',' << format_double(values[r]) << '\n';
      }
      json_out(to_json(report));
    } else if (name == "lln-weak") {
      const MeasureSpec m = measure();
      check_pairs(n_grid.empty() ? 0 : *std::max_element(n_grid.begin(), n_grid.end()), global);
      const ExperimentReport report = wlln_exceedance(m, s, eps, n_grid, reps, seed);
      if (!outs.csv.empty()) {
        std::ofstream o = open_output(outs.csv);
        o << "n,rep,J\n";
        for (const auto& cell : report.cells)
          for (std::size_t r = 0; r < cell.values.size(); ++r)
            o << cell.n << ',' << r << ',' << format_double(cell.values[r]) << '\n';
      }
      json_out(to_json(report));
    } else if (name == "lln-path") {
      const MeasureSpec m = measure();
      check_pairs(n_max, global);
      const auto p = slln_path(m, s, n_max, seed);
      json payload = {{"measure", to_json(m)}, {"s", number(s)}, {"n_max", n_max}, {"seed", seed},
                      {"final", number(p.back().second)}};
      if (has_reference_energy(m)) {
        const ReferenceEnergy ref = reference_energy(m, s);
        payload["oracle"] = number(ref.value);
        payload["oracle_method"] = ref.method;
        const std::size_t lo = n_max - n_max / 4;
        payload["tail_sup_deviation"] = {{"n_lo", lo}, {"n_hi", n_max}, {"value", number(sup_deviation(p, ref.value, lo, n_max))}};
      }
      if (include_path) {
        json rows = json::array();
        for (const auto& [k, v] : p) rows.push_back({k, number(v)});
        payload["path"] = rows;
      }
      if (!outs.csv.empty()) {
        std::ofstream o = open_output(outs.csv);
        o << "n,J\n";
        for (const auto& [k, v] : p) o << k << ',' << format_double(v) << '\n';
      }
      json_out(std::move(payload));
    } else if (name == "ballcheck") {
      const Source source = load_source(src, global);
      check_pairs(source.cloud.size(), global);
      const BallMeasureParams params{s, c};
      BallEnergyOptions options;
      options.allow_monte_carlo = allow_mc;
      options.monte_carlo_samples = mc_samples;
      options.seed = src.seed;
      const BallEnergy numeric = ball_energy_numeric(source.cloud, params, options);
      const BallPrediction predicted = ball_energy_predicted(source.cloud, params);
      json payload = source_payload(source);
      payload["params"] = {{"s", number(s)}, {"c", number(c)}, {"radius", number(ball_radius(params, source.cloud.size()))}};
      payload["numeric"] = to_json(numeric);
      payload["predicted"] = to_json(predicted);
      payload["relative_gap"] = number(std::abs(numeric.total - predicted.value) / predicted.value);
      json_out(std::move(payload));
    } else if (name == "distset" || name == "dotset") {
      const Source source = load_source(src, global);
      check_pairs(source.cloud.size(), global);
      const Quantization q{!no_exact, step};
      const ValueSet set = name == "distset" ? distance_set(source.cloud, q) : dot_product_set(source.cloud, q);
      json payload = to_json(set, values_limit);
      payload["source"] = source_payload(source);
      json_out(std::move(payload));
    } else if (name == "erdos") {
      const Source source = load_source(src, global);
      check_pairs(source.cloud.size(), global);
      const ErdosReport report =
          erdos_report(source.cloud, s0.empty() ? std::nullopt : std::optional(s0), Quantization{!no_exact, step});
      emit(outs.output, out, [&](std::ostream& o) {
        o << "s0,label,bound,count,ratio\n";
        for (const auto& r : report.rows)
          o << format_double(r.s0) << ',' << r.label << ',' << format_double(r.bound) << ',' << report.count << ','
            << format_double(r.ratio) << '\n';
      });
      side_json(to_json(report));
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const json::exception& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace riesz::cli
