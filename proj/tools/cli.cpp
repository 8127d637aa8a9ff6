#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "arrival/distributions.hpp"
#include "arrival/errors.hpp"
#include "arrival/manifest.hpp"
#include "arrival/moments.hpp"
#include "arrival/tdse_oracle.hpp"

namespace arrival::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct PacketOptions {
  double x0 = -50.0;
  double dx = 10.0;
  double v0 = 1.0;
  int nk = 400;

  GaussianSpec spec() const { return {x0, dx, v0}; }
};

struct TimeOptions {
  int nt = 1200;
  std::optional<double> tmin;
  std::optional<double> tmax;
};

struct FreeOptions {
  PacketOptions packet;
  TimeOptions time;
  std::string mode = "pos";
  std::string amp_file;
};

struct BarrierOptions {
  PacketOptions packet;
  TimeOptions time;
  double U = 0.0;
  double l = 10.0;
  std::string dist = "pot";
};

struct ScanOptions {
  PacketOptions packet;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 11;
  double U = 1.0;
  double l = 10.0;
  int jobs = 1;
};

struct ValidateOptions {
  PacketOptions packet;
  std::string profile = "free";
  double eps = 0.2;
  double v0l0 = 0.01;
  std::string scaling = "B";
  double alpha = 0.5;
  double U = 0.3;
  double a = -20.0;
  double b = -10.0;
  double dx_grid = 0.025;
  double dt = 0.05;
  int stride = 4;
  double tolerance = 0.02;

  ValidateOptions() { packet.nk = 200; }
};

void add_packet(CLI::App* sub, PacketOptions& p) {
  sub->add_option("--x0", p.x0, "initial mean position")->capture_default_str();
  sub->add_option("--dx", p.dx, "position spread")->capture_default_str();
  sub->add_option("--v0", p.v0, "mean velocity")->capture_default_str();
  sub->add_option("--nk", p.nk, "Gauss-Legendre nodes in k")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_time(CLI::App* sub, TimeOptions& t) {
  sub->add_option("--nt", t.nt, "number of time points")->capture_default_str()->check(CLI::Range(2, 10000000));
  sub->add_option("--tmin", t.tmin, "first time (default: automatic)");
  sub->add_option("--tmax", t.tmax, "last time (default: automatic)");
}

void packet_args(std::vector<std::string>& args, const PacketOptions& p) {
  args.insert(args.end(), {"--x0", format_exact(p.x0), "--dx", format_exact(p.dx), "--v0", format_exact(p.v0), "--nk",
                           std::to_string(p.nk)});
}

void time_args(std::vector<std::string>& args, const TimeOptions& t) {
  args.insert(args.end(), {"--nt", std::to_string(t.nt)});
  if (t.tmin) args.insert(args.end(), {"--tmin", format_exact(*t.tmin)});
  if (t.tmax) args.insert(args.end(), {"--tmax", format_exact(*t.tmax)});
}

void packet_params(RunManifest& m, const PacketOptions& p) {
  m.set("x0", p.x0);
  m.set("dx", p.dx);
  m.set("v0", p.v0);
  m.set("n_k", static_cast<double>(p.nk));
}

// Explicit grid when both ends are given; otherwise the automatic one.
struct TimeGrid {
  Times ts;
  bool automatic;
};

TimeGrid time_grid(const TimeOptions& t, const GaussianSpec& spec) {
  if (t.tmin.has_value() != t.tmax.has_value()) throw ConfigurationError("--tmin and --tmax must be given together");
  if (t.tmin) return {uniform_times(*t.tmin, *t.tmax, t.nt), false};
  return {default_time_grid(spec, {}, t.nt), true};
}

TimeDistribution evaluate(DistributionVariant v, const TimeGrid& grid,
                          const std::function<std::vector<double>(const Times&)>& density) {
  if (grid.automatic) return make_distribution(v, grid.ts, density);
  return make_distribution(v, grid.ts, density, std::numeric_limits<double>::infinity());
}

void time_params(RunManifest& m, const TimeDistribution& d, const TimeOptions& t) {
  m.set("n_t", static_cast<double>(d.t.size()));
  m.set("n_t_requested", static_cast<double>(t.nt));
  m.set("t_min", d.t.front());
  m.set("t_max", d.t.back());
}

std::vector<std::vector<double>> distribution_rows(const TimeDistribution& d) {
  std::vector<std::vector<double>> rows;
  rows.reserve(d.t.size());
  for (std::size_t i = 0; i < d.t.size(); ++i) rows.push_back({d.t[i], d.density[i]});
  return rows;
}

struct Output {
  RunManifest manifest;
  std::string columns;
  std::vector<std::string> rows;
  int status = kOk;
};

Output csv_output(RunManifest manifest, const std::vector<std::string>& columns,
                  const std::vector<std::vector<double>>& rows) {
  Output o;
  o.manifest = std::move(manifest);
  for (std::size_t i = 0; i < columns.size(); ++i) o.columns += (i ? "," : "") + columns[i];
  o.rows.reserve(rows.size());
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "," : "") + format_number(r[i]);
    o.rows.push_back(std::move(line));
  }
  return o;
}

int check_total(std::ostream& err, const char* what, double total, double expected, bool enforce) {
  const double dev = std::abs(total - expected) / std::max(std::abs(expected), 1e-300);
  err << what << ": total = " << format_number(total) << " (expected " << format_number(expected) << ")\n";
  if (enforce && dev > 1e-6) {
    err << "consistency check failed: relative deviation " << format_number(dev) << " > 1e-6\n";
    return kNumerical;
  }
  return kOk;
}

Output cmd_free(const FreeOptions& o, std::ostream& err) {
  const GaussianSpec spec = o.packet.spec();
  RunManifest m;
  m.subcommand = "free";
  m.args = {"free"};
  packet_args(m.args, o.packet);
  time_args(m.args, o.time);
  m.args.insert(m.args.end(), {"--mode", o.mode});
  if (!o.amp_file.empty()) m.args.insert(m.args.end(), {"--amp-file", o.amp_file});
  packet_params(m, o.packet);
  m.set("mode", o.mode);
  if (!o.amp_file.empty()) m.set("amp_file", o.amp_file);

  const TimeGrid grid = time_grid(o.time, spec);
  TimeDistribution d;
  if (o.mode == "pos") {
    const MomentumAmplitude amp = o.amp_file.empty() ? gaussian_packet(spec, {}, o.packet.nk) : load_tabulated(o.amp_file);
    d = evaluate(DistributionVariant::Kijowski, grid, [&](const Times& t) { return kijowski(amp, t); });
  } else {
    MomentumAmplitude amp;
    if (o.mode == "general") {
      if (o.amp_file.empty()) throw CLI::RequiredError("--amp-file (required by --mode general)");
      amp = load_tabulated(o.amp_file);
    } else {
      amp = mirrored_pair(spec, o.mode == "sym" ? 1.0 : -1.0, {}, o.packet.nk);
    }
    d = evaluate(DistributionVariant::OnGeneral, grid, [&](const Times& t) { return pi_on_general(amp, t); });
  }
  time_params(m, d, o.time);
  m.set("variant", variant_name(d.variant));
  Output out = csv_output(m, {"t", "Pi"}, distribution_rows(d));
  out.status = check_total(err, variant_name(d.variant), d.total, 1.0, grid.automatic && o.amp_file.empty());
  err << "mean arrival time (t grid) = " << format_number(d.mean()) << '\n';
  return out;
}

Output cmd_barrier(const BarrierOptions& o, std::ostream& err) {
  const GaussianSpec spec = o.packet.spec();
  if (!(o.l > 0.0)) throw ConfigurationError("--l must be positive");
  if (o.U < 0.0) throw ConfigurationError("--U must be non-negative");
  const BarrierSpec barrier{o.U, o.l};
  RunManifest m;
  m.subcommand = "barrier";
  m.args = {"barrier"};
  packet_args(m.args, o.packet);
  time_args(m.args, o.time);
  m.args.insert(m.args.end(), {"--U", format_exact(o.U), "--l", format_exact(o.l), "--dist", o.dist});
  packet_params(m, o.packet);
  m.set("U", o.U);
  m.set("l", o.l);
  m.set("dist", o.dist);

  const TimeGrid grid = time_grid(o.time, spec);
  TimeDistribution d;
  double expected = 1.0;
  if (o.dist == "pot") {
    const MomentumAmplitude amp = gaussian_packet(spec, {}, o.packet.nk);
    d = evaluate(DistributionVariant::OnBarrier, grid,
                 [&](const Times& t) { return pi_on_barrier(amp, BarrierPhase{barrier}, t); });
    err << "mean arrival time (k space) = " << format_number(mean_arrival(amp, BarrierPhase{barrier}, spec.x0)) << '\n';
  } else {
    const MomentumAmplitude amp =
        sample(transmitted_rule(spec, barrier), [&](double k) { return gaussian_amplitude(spec, k); });
    if (o.dist == "kn") {
      d = evaluate(DistributionVariant::KijowskiTransmittedNormalized, grid,
                   [&](const Times& t) { return pi_kn(amp, barrier, t); });
    } else {
      d = evaluate(DistributionVariant::TildeOnBarrier, grid, [&](const Times& t) { return pi_tilde(amp, barrier, t); });
      expected = transmission_probability(amp, barrier);
    }
    m.set("transmission_probability", transmission_probability(amp, barrier));
  }
  time_params(m, d, o.time);
  m.set("variant", variant_name(d.variant));
  Output out = csv_output(m, {"t", "Pi"}, distribution_rows(d));
  out.status = check_total(err, variant_name(d.variant), d.total, expected, grid.automatic);
  err << "mean arrival time (t grid) = " << format_number(d.mean()) << '\n';
  return out;
}

Output cmd_scan(const ScanOptions& o, std::ostream& err) {
  if (o.steps < 1) throw ConfigurationError("scan range is empty: --steps must be at least 1");
  if (o.to < o.from || (o.steps > 1 && o.to == o.from)) throw ConfigurationError("scan range is empty: need --from < --to");
  if (o.jobs < 1) throw ConfigurationError("--jobs must be positive");
  const GaussianSpec spec = o.packet.spec();
  RunManifest m;
  m.subcommand = "scan";
  m.args = {"scan"};
  packet_args(m.args, o.packet);
  m.args.insert(m.args.end(), {"--param", o.param, "--from", format_exact(o.from), "--to", format_exact(o.to), "--steps",
                               std::to_string(o.steps), "--U", format_exact(o.U), "--l", format_exact(o.l), "--jobs",
                               std::to_string(o.jobs)});
  packet_params(m, o.packet);
  m.set("param", o.param);
  m.set("from", o.from);
  m.set("to", o.to);
  m.set("steps", static_cast<double>(o.steps));
  m.set(o.param == "height" ? "l" : "U", o.param == "height" ? o.l : o.U);

  std::vector<double> values(o.steps);
  for (int i = 0; i < o.steps; ++i) values[i] = o.steps == 1 ? o.from : o.from + (o.to - o.from) * i / (o.steps - 1);
  std::vector<std::optional<TimingReport>> reports(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      const BarrierSpec b = o.param == "height" ? BarrierSpec{values[i], o.l} : BarrierSpec{o.U, values[i]};
      try {
        reports[i] = timing_report(spec, b, {}, o.packet.nk);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < o.jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < values.size(); ++i)
    if (!reports[i]) throw NumericalError("scan point " + format_number(values[i]) + ": " + errors[i]);

  Output out;
  out.manifest = m;
  out.columns = TimingReport::csv_header();
  for (const auto& r : reports) out.rows.push_back(r->csv_row());
  err << "scan: " << values.size() << " points\n";
  return out;
}

Output cmd_validate(const ValidateOptions& o, std::ostream& err) {
  const GaussianSpec spec = o.packet.spec();
  AbsorberScaling scaling;
  scaling.scaling_case = o.scaling == "A" ? ScalingCase::A : ScalingCase::B;
  scaling.alpha = o.alpha;
  scaling.v0_l0 = o.v0l0;
  scaling.epsilon = o.eps;
  const PotentialProfile profile = o.profile == "free" ? free_absorber_profile(scaling)
                                                       : barrier_absorber_profile({o.U, o.a, o.b}, scaling);
  RunManifest m;
  m.subcommand = "validate";
  m.args = {"validate"};
  packet_args(m.args, o.packet);
  m.args.insert(m.args.end(),
                {"--profile", o.profile, "--eps", format_exact(o.eps), "--v0l0", format_exact(o.v0l0), "--case", o.scaling,
                 "--alpha", format_exact(o.alpha), "--U", format_exact(o.U), "--a", format_exact(o.a), "--b",
                 format_exact(o.b), "--dx-grid", format_exact(o.dx_grid), "--dt", format_exact(o.dt), "--stride",
                 std::to_string(o.stride), "--tolerance", format_exact(o.tolerance)});
  packet_params(m, o.packet);
  m.set("profile", o.profile);
  m.set("eps", o.eps);
  m.set("v0l0", o.v0l0);
  m.set("case", o.scaling);
  if (o.scaling == "B") m.set("alpha", o.alpha);
  if (o.profile == "barrier") {
    m.set("U", o.U);
    m.set("a", o.a);
    m.set("b", o.b);
  }
  m.set("dx_grid", o.dx_grid);
  m.set("dt", o.dt);
  std::istringstream regions(describe(profile));
  for (std::string line; std::getline(regions, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) m.set(line.substr(0, eq), line.substr(eq + 3));
  }

  OracleOptions opts;
  opts.dx_grid = o.dx_grid;
  opts.dt = o.dt;
  const OracleRun run = propagate(spec, profile, opts);
  const OracleComparison c = compare_with_stationary(run, spec, profile, {}, o.packet.nk, o.stride);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < c.t.size(); ++i) rows.push_back({c.t[i], c.rate_grid[i], c.rate_stationary[i]});
  Output out = csv_output(m, {"t", "rate_grid", "rate_stationary"}, rows);

  const bool l1_ok = c.l1_relative < o.tolerance;
  const bool book_ok = c.max_bookkeeping_error < 1e-6;
  err << "absorbed (grid) = " << format_number(c.absorbed_grid) << '\n'
      << "absorbed (stationary) = " << format_number(c.absorbed_stationary) << '\n'
      << "L1 / absorbed = " << format_number(c.l1_relative) << " (tolerance " << format_number(o.tolerance) << ")\n"
      << "max |norm + absorbed - 1| = " << format_number(c.max_bookkeeping_error) << '\n'
      << (l1_ok && book_ok ? "PASS" : "FAIL") << '\n';
  out.status = l1_ok && book_ok ? kOk : kNumerical;
  return out;
}

void emit(const Output& o, const std::string& out_path, const std::string& subcommand, std::ostream& out) {
  std::string path = out_path;
  if (path.empty()) {
    if (const char* dir = std::getenv("ARRIVAL_OUTPUT_DIR"); dir && *dir)
      path = (std::filesystem::path(dir) / (subcommand + ".csv")).string();
  }
  if (path.empty()) {
    write_csv(out, o.manifest, o.columns, o.rows);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigurationError("cannot write " + path);
  write_csv(file, o.manifest, o.columns, o.rows);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Arrival-time distributions for free and tunnelling wave packets", "arrival"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("arrival ") + kToolVersion);

  std::string out_path;
  FreeOptions free_o;
  BarrierOptions barrier_o;
  ScanOptions scan_o;
  ValidateOptions validate_o;
  std::string manifest_path;

  auto* free_cmd = app.add_subcommand("free", "Kijowski / operator-normalized distributions of free packets");
  add_packet(free_cmd, free_o.packet);
  add_time(free_cmd, free_o.time);
  free_cmd->add_option("--mode", free_o.mode, "pos, sym, antisym or general")
      ->capture_default_str()
      ->check(CLI::IsMember({"pos", "sym", "antisym", "general"}));
  free_cmd->add_option("--amp-file", free_o.amp_file, "tabulated amplitude: k Re [Im]")->check(CLI::ExistingFile);
  free_cmd->add_option("--out", out_path, "output CSV");

  auto* barrier_cmd = app.add_subcommand("barrier", "distributions behind a square barrier");
  add_packet(barrier_cmd, barrier_o.packet);
  add_time(barrier_cmd, barrier_o.time);
  barrier_cmd->add_option("--U", barrier_o.U, "barrier height")->required();
  barrier_cmd->add_option("--l", barrier_o.l, "barrier width")->capture_default_str();
  barrier_cmd->add_option("--dist", barrier_o.dist, "pot, kn or tilde")
      ->capture_default_str()
      ->check(CLI::IsMember({"pot", "kn", "tilde"}));
  barrier_cmd->add_option("--out", out_path, "output CSV");

  auto* scan_cmd = app.add_subcommand("scan", "mean arrival and tunnelling times over barrier height or width");
  add_packet(scan_cmd, scan_o.packet);
  scan_cmd->add_option("--param", scan_o.param, "height or width")->required()->check(CLI::IsMember({"height", "width"}));
  scan_cmd->add_option("--from", scan_o.from, "first value")->required();
  scan_cmd->add_option("--to", scan_o.to, "last value")->required();
  scan_cmd->add_option("--steps", scan_o.steps, "number of values")->capture_default_str();
  scan_cmd->add_option("--U", scan_o.U, "height for width scans")->capture_default_str();
  scan_cmd->add_option("--l", scan_o.l, "width for height scans")->capture_default_str();
  scan_cmd->add_option("--jobs", scan_o.jobs, "worker threads")->capture_default_str();
  scan_cmd->add_option("--out", out_path, "output CSV");

  auto* validate_cmd = app.add_subcommand("validate", "compare a grid propagation with the stationary absorption rate");
  add_packet(validate_cmd, validate_o.packet);
  validate_cmd->add_option("--profile", validate_o.profile, "free or barrier")
      ->capture_default_str()
      ->check(CLI::IsMember({"free", "barrier"}));
  validate_cmd->add_option("--eps", validate_o.eps, "absorber half-width")->capture_default_str();
  validate_cmd->add_option("--v0l0", validate_o.v0l0, "absorber strength V0*L0")->capture_default_str();
  validate_cmd->add_option("--case", validate_o.scaling, "absorber scaling A or B")
      ->capture_default_str()
      ->check(CLI::IsMember({"A", "B"}));
  validate_cmd->add_option("--alpha", validate_o.alpha, "exponent for case B")->capture_default_str();
  validate_cmd->add_option("--U", validate_o.U, "barrier height")->capture_default_str();
  validate_cmd->add_option("--a", validate_o.a, "barrier left edge")->capture_default_str();
  validate_cmd->add_option("--b", validate_o.b, "barrier right edge")->capture_default_str();
  validate_cmd->add_option("--dx-grid", validate_o.dx_grid, "grid spacing")->capture_default_str();
  validate_cmd->add_option("--dt", validate_o.dt, "time step")->capture_default_str();
  validate_cmd->add_option("--stride", validate_o.stride, "compare every n-th step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--tolerance", validate_o.tolerance, "L1 tolerance relative to absorbed mass")
      ->capture_default_str();
  validate_cmd->add_option("--out", out_path, "output CSV");

  auto* rerun_cmd = app.add_subcommand("rerun", "regenerate an output file from its header");
  rerun_cmd->add_option("manifest", manifest_path, "CSV written by an earlier run")->required();
  rerun_cmd->add_option("--out", out_path, "output CSV");

  std::vector<std::string> argv_store{"arrival"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Output result;
  std::string sub;
  if (*free_cmd) {
    sub = "free";
    result = cmd_free(free_o, err);
  } else if (*barrier_cmd) {
    sub = "barrier";
    result = cmd_barrier(barrier_o, err);
  } else if (*scan_cmd) {
    sub = "scan";
    result = cmd_scan(scan_o, err);
  } else if (*validate_cmd) {
    sub = "validate";
    result = cmd_validate(validate_o, err);
  } else {
    if (depth > 0) throw ConfigurationError("a manifest cannot point to another rerun");
    const RunManifest m = RunManifest::load(manifest_path);
    if (m.version != kToolVersion)
      err << "warning: manifest written by version " << m.version << ", running " << kToolVersion << '\n';
    std::vector<std::string> again = m.args;
    if (!out_path.empty()) again.insert(again.end(), {"--out", out_path});
    return dispatch(again, out, err, depth + 1);
  }
  emit(result, out_path, sub, out);
  return result.status;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  try {
    return parse_and_run(args, out, err, depth);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigurationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return dispatch(args, out, err, 0);
}

}  // namespace arrival::cli
