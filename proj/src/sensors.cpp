#include "ropesway/sensors.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ropesway/errors.hpp"

namespace ropesway {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0,1) from a hashed (seed, sample, sensor, lane) tuple.
double unit_draw(std::uint64_t seed, std::uint64_t sample,
                 std::uint64_t sensor, std::uint64_t lane) {
  std::uint64_t u = splitmix64(seed);
  u = splitmix64(u ^ sample);
  u = splitmix64(u ^ sensor);
  u = splitmix64(u ^ lane);
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> SensorModel::default_positions(const RopeParams& p,
                                                   int count) {
  std::vector<double> y(count);
  for (int i = 1; i <= count; ++i)
    y[i - 1] = p.l * i / static_cast<double>(count + 1);
  return y;
}

void SensorModel::validate(const RopeParams& p, int modes) const {
  if (!(noise_amplitude >= 0.0))
    throw ConfigError("sensors.noise_amplitude must be >= 0");
  if (static_cast<int>(positions.size()) < modes)
    throw ConfigError("sensors.positions must provide at least modes.count stations");
  for (double y : positions)
    if (!(y > 0.0 && y < p.l))
      throw ConfigError("sensors.positions must lie strictly inside (0, l)");
}

double sensor_noise(const SensorModel& s, std::uint64_t sample_index,
                    std::uint32_t sensor_index) {
  if (s.noise_amplitude == 0.0) return 0.0;
  const double u = unit_draw(s.seed, sample_index, sensor_index, 0);
  if (s.noise == NoiseKind::uniform)
    return s.noise_amplitude * (2.0 * u - 1.0);
  const double v = unit_draw(s.seed, sample_index, sensor_index, 1);
  // Box–Muller; 1-u keeps the log argument in (0,1].
  return s.noise_amplitude * std::sqrt(-2.0 * std::log(1.0 - u)) *
         std::cos(2.0 * M_PI * v);
}

std::vector<double> measure(const ModalState& state, const RopeParams& p,
                            const ModalBasis& basis, const BoundaryMotion& bm,
                            const SensorModel& sensors,
                            std::uint64_t sample_index) {
  std::vector<double> out(sensors.positions.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = sway_at(sensors.positions[i], state.q, p, basis, bm) +
             sensor_noise(sensors, sample_index, static_cast<std::uint32_t>(i));
  return out;
}

Reconstructor::Reconstructor(const RopeParams& p, const ModalBasis& basis,
                             const std::vector<double>& positions)
    : positions_(positions), l_(p.l) {
  const int n = basis.count();
  const int rows = static_cast<int>(positions.size());
  if (rows < n)
    throw ConfigError("sensors.positions must provide at least modes.count stations");
  phi_.resize(rows, n);
  const double inv_sql = 1.0 / std::sqrt(p.l);
  for (int i = 0; i < rows; ++i) {
    if (!(positions[i] > 0.0 && positions[i] < p.l))
      throw ConfigError("sensors.positions must lie strictly inside (0, l)");
    for (int j = 1; j <= n; ++j)
      phi_(i, j - 1) = basis.psi(j, positions[i] / p.l) * inv_sql;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi_);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  condition_ = smin > 0.0 ? smax / smin
                          : std::numeric_limits<double>::infinity();
  if (!(condition_ <= 1e6))
    throw ConfigError(
        "sensors.positions give a rank-deficient sway-to-mode inversion "
        "(condition number " + std::to_string(condition_) + " > 1e6); "
        "move sensors off the mode nodes");
  qr_.compute(phi_);
}

Eigen::VectorXd Reconstructor::solve_modal(const std::vector<double>& samples,
                                           const BoundaryMotion& bm) const {
  if (samples.size() != positions_.size())
    throw DomainError("reconstruct: sample count does not match sensor count");
  Eigen::VectorXd w(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double y = positions_[i];
    // strip the boundary ramp so only the modal part remains
    w(static_cast<Eigen::Index>(i)) =
        samples[i] - (l_ - y) / l_ * bm.f1 - y / l_ * bm.f2;
  }
  return qr_.solve(w);
}

ModalState Reconstructor::estimate(const std::vector<double>& samples,
                                   const BoundaryMotion& bm, double t,
                                   const ModalState* previous,
                                   double dt_control) const {
  ModalState est;
  est.t = t;
  est.q = solve_modal(samples, bm);
  if (previous && dt_control > 0.0)
    est.qd = (est.q - previous->q) / dt_control;
  else
    est.qd = Eigen::VectorXd::Zero(est.q.size());
  return est;
}

}  // namespace ropesway
