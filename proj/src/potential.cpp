#include "arrival/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "arrival/errors.hpp"
#include "arrival/manifest.hpp"

namespace arrival {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PotentialProfile::PotentialProfile(std::vector<Region> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw ConfigurationError("profile needs at least one region");
  if (regions_.front().x_left != -kInf || regions_.back().x_right != kInf)
    throw ConfigurationError("outer regions must be semi-infinite");
  if (regions_.front().v != cplx(0.0) || regions_.back().v != cplx(0.0))
    throw ConfigurationError("outer regions must have zero potential");
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const Region& r = regions_[i];
    if (!(r.x_left < r.x_right)) throw ConfigurationError("region " + std::to_string(i) + " is empty");
    if (i + 1 < regions_.size() && r.x_right != regions_[i + 1].x_left)
      throw ConfigurationError("regions " + std::to_string(i) + " and " + std::to_string(i + 1) +
                               " are not contiguous");
  }
}

PotentialProfile PotentialProfile::from_breakpoints(const std::vector<double>& breakpoints,
                                                    const std::vector<cplx>& values) {
  if (values.size() != breakpoints.size() + 1)
    throw ConfigurationError("need one more region value than breakpoints");
  std::vector<Region> regions;
  regions.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double left = i == 0 ? -kInf : breakpoints[i - 1];
    double right = i == breakpoints.size() ? kInf : breakpoints[i];
    regions.push_back({left, right, values[i]});
  }
  return PotentialProfile(std::move(regions));
}

std::optional<std::size_t> PotentialProfile::absorber_index() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].v.imag() < 0.0) {
      if (found) throw ConfigurationError("profile has more than one absorbing region");
      found = i;
    }
  }
  return found;
}

bool PotentialProfile::is_real() const {
  for (const Region& r : regions_)
    if (r.v.imag() != 0.0) return false;
  return true;
}

void AbsorberScaling::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("absorber half-width eps must be positive");
  if (!(v0_l0 > 0.0)) throw DomainError("absorber strength V0*L0 must be positive");
  if (scaling_case == ScalingCase::B && !(alpha > 0.0 && alpha < 1.0))
    throw DomainError("case B scaling needs 0 < alpha < 1");
}

double AbsorberScaling::c() const {
  validate();
  return scaling_case == ScalingCase::A ? epsilon : std::pow(epsilon, alpha);
}

double AbsorberScaling::strength() const { return v0_l0 / (2.0 * c()); }

cplx region_wavenumber(double k, cplx v, const Units& units) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const cplx k2 = cplx(k * k, 0.0) - units.energy_to_k2() * v;
  cplx root = std::sqrt(k2);
  if (root.imag() < 0.0) root = -root;
  if (root.imag() == 0.0 && root.real() < 0.0) root = -root;
  return root;
}

cplx absorber_q(double k, const AbsorberScaling& scaling, const Units& units) {
  scaling.validate();
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const double gamma = units.mass * scaling.v0_l0 / (units.hbar * units.hbar * scaling.c());
  cplx root = std::sqrt(cplx(k * k, gamma));
  if (root.imag() < 0.0) root = -root;
  return root;
}

PotentialProfile free_absorber_profile(const AbsorberScaling& scaling) {
  scaling.validate();
  const double eps = scaling.epsilon;
  return PotentialProfile::from_breakpoints({-eps, eps}, {0.0, cplx(0.0, -scaling.strength()), 0.0});
}

PotentialProfile barrier_absorber_profile(const SquareBarrier& barrier, const AbsorberScaling& scaling) {
  scaling.validate();
  const double eps = scaling.epsilon;
  if (!(barrier.a < barrier.b)) throw ConfigurationError("barrier needs a < b");
  if (!(barrier.b < -eps))
    throw ConfigurationError("barrier [a, b] must end strictly left of the absorber at -eps");
  return PotentialProfile::from_breakpoints(
      {barrier.a, barrier.b, -eps, eps},
      {0.0, cplx(barrier.height, 0.0), 0.0, cplx(0.0, -scaling.strength()), 0.0});
}

PotentialProfile barrier_profile(const SquareBarrier& barrier) {
  if (!(barrier.a < barrier.b)) throw ConfigurationError("barrier needs a < b");
  return PotentialProfile::from_breakpoints({barrier.a, barrier.b}, {0.0, cplx(barrier.height, 0.0), 0.0});
}

std::string describe(const PotentialProfile& profile) {
  std::ostringstream os;
  os << "regions = " << profile.size() << '\n';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Region& r = profile[i];
    os << "region." << i << " = " << format_number(r.x_left) << ',' << format_number(r.x_right) << ','
       << format_number(r.v.real()) << ',' << format_number(r.v.imag()) << '\n';
  }
  return os.str();
}

}  // namespace arrival
