#include "arrival/tdse_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "arrival/distributions.hpp"
#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};

double packet_width(const GaussianSpec& spec, double t, const Units& units) {
  const double spread = units.hbar * t / (2.0 * units.mass * spec.dx);
  return std::sqrt(spec.dx * spec.dx + spread * spread);
}

double packet_centre(const GaussianSpec& spec, double t) { return spec.x0 + spec.v0 * t; }

// Potential seen by a grid node; nodes on a breakpoint get the mean of both sides.
cplx node_potential(const PotentialProfile& profile, double x, double tol) {
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double b = profile.boundary(i);
    if (std::abs(x - b) <= tol) return 0.5 * (profile[i].v + profile[i + 1].v);
  }
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (x < profile[i].x_right) return profile[i].v;
  return profile[profile.last_index()].v;
}

}  // namespace

double GridState::norm() const {
  if (x.size() < 2) return 0.0;
  const double dx = x[1] - x[0];
  double s = 0.0;
  for (const cplx& p : psi) s += std::norm(p);
  return s * dx;
}

double absorption_rate(const GridState& state, const PotentialProfile& profile, const Units& units) {
  if (state.x.size() < 2) return 0.0;
  const double dx = state.x[1] - state.x[0];
  double s = 0.0;
  for (std::size_t j = 0; j < state.x.size(); ++j) {
    const double w = -node_potential(profile, state.x[j], 1e-9 * dx).imag();
    if (w > 0.0) s += w * std::norm(state.psi[j]);
  }
  return 2.0 / units.hbar * s * dx;
}

OracleRun propagate(const GaussianSpec& packet, const PotentialProfile& profile, const OracleOptions& options) {
  packet.validate();
  const Units& u = options.units;
  if (!(packet.v0 > 0.0)) throw ConfigurationError("oracle needs a right-moving packet (v0 > 0)");
  if (profile.size() < 2) throw ConfigurationError("oracle needs a profile with at least one boundary");
  if (!(options.dt > 0.0) || !(options.dx_grid > 0.0)) throw ConfigurationError("dt and dx_grid must be positive");

  // Grid spacing: the absorber edges must fall on nodes.
  double dx = options.dx_grid;
  if (const auto idx = profile.absorber_index()) {
    const Region& r = profile[*idx];
    const double width = r.x_right - r.x_left;
    if (options.dx_grid > width / 16.0)
      throw ConfigurationError("dx_grid must resolve the absorber: dx_grid <= eps/8");
    dx = width / std::ceil(width / options.dx_grid);
    if (std::abs(std::round(r.x_left / dx) * dx - r.x_left) > 1e-9 * dx)
      throw ConfigurationError("absorber edges must lie on grid nodes");
  }

  const double k_max = std::abs(packet.k0(u)) + 8.0 * packet.dk();
  const double v_max = u.velocity(k_max);
  const double e_max = u.hbar * u.hbar * k_max * k_max / (2.0 * u.mass);
  if (e_max * options.dt / u.hbar > 0.5)
    throw ConfigurationError("time step too large for the packet's energy range (E_max dt / hbar > 0.5)");

  const double x_first = profile.boundary(0);
  const double x_last = profile.boundary(profile.last_index() - 1);
  const double t_peak = std::abs(packet.x0) / packet.v0;
  const double sigma_t = packet_width(packet, t_peak, u) / packet.v0;
  const double t_final = std::isnan(options.t_final) ? t_peak + 12.0 * sigma_t : options.t_final;
  double t_start = options.t_start;
  if (std::isnan(t_start)) {
    t_start = 0.0;
    while (packet_centre(packet, t_start) + 12.0 * packet_width(packet, t_start, u) > x_first) t_start -= 1.0;
  }
  if (!(t_final > t_start)) throw ConfigurationError("t_final must exceed the start time");

  const double w_start = packet_width(packet, t_start, u);
  const double x_min = std::min(packet_centre(packet, t_start) - 12.0 * w_start,
                                x_first - v_max * (t_final - t_start)) - 5.0;
  const double x_max = std::max(x_last, packet.x0 + v_max * t_final + 12.0 * packet_width(packet, t_final, u)) + 5.0;
  const long j_min = static_cast<long>(std::floor(x_min / dx));
  const long j_max = static_cast<long>(std::ceil(x_max / dx));
  const std::size_t n = static_cast<std::size_t>(j_max - j_min + 1);

  GridState state;
  state.x.resize(n);
  state.psi.resize(n);
  state.dt = options.dt;
  state.t = t_start;
  std::vector<double> absorb(n);  // W_j >= 0, H contains -i W
  std::vector<double> v_real(n);
  for (std::size_t j = 0; j < n; ++j) {
    state.x[j] = static_cast<double>(j_min + static_cast<long>(j)) * dx;
    const cplx v = node_potential(profile, state.x[j], 1e-9 * dx);
    v_real[j] = v.real();
    absorb[j] = -v.imag();
    state.psi[j] = gaussian_position(packet, state.x[j], t_start, u);
  }
  state.psi.front() = state.psi.back() = 0.0;
  const double norm0 = state.norm();
  for (cplx& p : state.psi) p /= std::sqrt(norm0);

  // (1 + i dt H / 2 hbar) psi^{n+1} = (1 - i dt H / 2 hbar) psi^n, H tridiagonal.
  const double kin = u.hbar * u.hbar / (2.0 * u.mass * dx * dx);
  const cplx coef = I * options.dt / (2.0 * u.hbar);
  const cplx off = coef * (-kin);
  std::vector<cplx> diag(n), cprime(n), denom(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = 1.0 + coef * (2.0 * kin + cplx(v_real[j], -absorb[j]));
  denom[0] = diag[0];
  cprime[0] = off / denom[0];
  for (std::size_t j = 1; j < n; ++j) {
    denom[j] = diag[j] - off * cprime[j - 1];
    cprime[j] = off / denom[j];
  }
  std::vector<cplx> inv_denom(n);
  for (std::size_t j = 0; j < n; ++j) inv_denom[j] = 1.0 / denom[j];
  std::vector<std::size_t> absorber_nodes;
  for (std::size_t j = 0; j < n; ++j)
    if (absorb[j] > 0.0) absorber_nodes.push_back(j);

  OracleRun run;
  run.t_start = t_start;
  run.dt = options.dt;
  run.dx = dx;
  run.x_min = state.x.front();
  run.x_max = state.x.back();
  std::vector<double> snaps = options.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  const long steps = static_cast<long>(std::ceil((t_final - t_start) / options.dt - 1e-9));
  run.t_mid.reserve(steps);
  run.rate.reserve(steps);
  run.bookkeeping.reserve(steps);
  std::vector<cplx> rhs(n), y(n), old(n);
  for (long s = 0; s < steps; ++s) {
    while (next_snap < snaps.size() && snaps[next_snap] < state.t + 0.5 * options.dt) {
      if (snaps[next_snap] > state.t - 0.5 * options.dt) run.snapshots.push_back(state);
      ++next_snap;
    }
    old = state.psi;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx left = j > 0 ? old[j - 1] : cplx(0.0);
      const cplx right = j + 1 < n ? old[j + 1] : cplx(0.0);
      rhs[j] = (2.0 - diag[j]) * old[j] - off * (left + right);
    }
    y[0] = rhs[0] * inv_denom[0];
    for (std::size_t j = 1; j < n; ++j) y[j] = (rhs[j] - off * y[j - 1]) * inv_denom[j];
    state.psi[n - 1] = y[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) state.psi[j] = y[j] - cprime[j] * state.psi[j + 1];

    double r = 0.0;
    for (std::size_t j : absorber_nodes) r += absorb[j] * std::norm(0.5 * (old[j] + state.psi[j]));
    r *= 2.0 / u.hbar * dx;
    state.absorbed += r * options.dt;
    state.t = t_start + static_cast<double>(s + 1) * options.dt;
    run.t_mid.push_back(state.t - 0.5 * options.dt);
    run.rate.push_back(r);
    const double book = state.norm() + state.absorbed - 1.0;
    run.bookkeeping.push_back(book);
    if (book > 1e-6) throw NumericalError("norm growth detected; reduce the step size");
  }
  run.absorbed = state.absorbed;
  run.final_state = std::move(state);
  return run;
}

OracleComparison compare_with_stationary(const OracleRun& run, const GaussianSpec& packet,
                                         const PotentialProfile& profile, const Units& units, int n_k, int stride) {
  if (stride < 1) throw ConfigurationError("stride must be positive");
  const MomentumAmplitude amp = gaussian_packet(packet, units, n_k);
  Times ts;
  std::vector<double> grid_rate;
  for (std::size_t i = 0; i < run.t_mid.size(); i += stride) {
    ts.push_back(run.t_mid[i]);
    grid_rate.push_back(run.rate[i]);
  }
  const std::vector<double> stat = pi_finite_eps(amp, profile, ts, false, units);
  OracleComparison c;
  const double h = run.dt * stride;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    c.l1 += std::abs(grid_rate[i] - stat[i]) * h;
    c.absorbed_grid += grid_rate[i] * h;
    c.absorbed_stationary += stat[i] * h;
  }
  c.l1_relative = c.absorbed_grid > 0.0 ? c.l1 / c.absorbed_grid : 0.0;
  for (double b : run.bookkeeping) c.max_bookkeeping_error = std::max(c.max_bookkeeping_error, std::abs(b));
  c.t = std::move(ts);
  c.rate_grid = std::move(grid_rate);
  c.rate_stationary = stat;
  return c;
}

}  // namespace arrival
