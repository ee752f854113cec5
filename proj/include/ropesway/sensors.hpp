#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ropesway/disturbance.hpp"
#include "ropesway/modal_basis.hpp"
#include "ropesway/modal_state.hpp"
#include "ropesway/rope_params.hpp"
#include "ropesway/system_matrices.hpp"

namespace ropesway {

enum class NoiseKind { uniform, gaussian };

// Simulated lateral-displacement sensors along the rope. Noise draws are
// counter-based (hashed from seed, sample index, and sensor index) so a
// stream is reproducible and independent of the integrator step size.
struct SensorModel {
  std::vector<double> positions;   // stations y in (0, l) [m]
  double noise_amplitude = 0.01;   // half-width (uniform) or σ (gaussian) [m]
  NoiseKind noise = NoiseKind::uniform;
  std::uint64_t seed = 0;

  // Evenly spaced interior stations y_i = l·i/(count+1); for the sine basis
  // with count = modes this collocation is orthogonal (condition number 1).
  static std::vector<double> default_positions(const RopeParams& p, int count);

  // Throws ConfigError: needs noise_amplitude ≥ 0, at least `modes` stations,
  // all strictly inside (0, l).
  void validate(const RopeParams& p, int modes) const;
};

// Deterministic noise draw for (sample, sensor); zero when amplitude is 0.
double sensor_noise(const SensorModel& s, std::uint64_t sample_index,
                    std::uint32_t sensor_index);

// Sway at each station for the true state plus per-sensor noise.
std::vector<double> measure(const ModalState& state, const RopeParams& p,
                            const ModalBasis& basis, const BoundaryMotion& bm,
                            const SensorModel& sensors,
                            std::uint64_t sample_index);

// Least-squares inversion of the sensor stack: solves Φ q = w where
// Φ_ij = ψ_j(y_i/l)/√l, after removing the boundary-ramp part of the sway.
class Reconstructor {
 public:
  // Throws ConfigError when the collocation matrix is rank deficient or its
  // condition number exceeds 1e6 (sensors sitting on mode nodes).
  Reconstructor(const RopeParams& p, const ModalBasis& basis,
                const std::vector<double>& positions);

  double condition() const { return condition_; }
  const Eigen::MatrixXd& phi() const { return phi_; }

  Eigen::VectorXd solve_modal(const std::vector<double>& samples,
                              const BoundaryMotion& bm) const;

  // Full state estimate: position from solve_modal, velocity by backward
  // difference against `previous` over dt_control (zero when no history).
  ModalState estimate(const std::vector<double>& samples,
                      const BoundaryMotion& bm, double t,
                      const ModalState* previous, double dt_control) const;

 private:
  std::vector<double> positions_;
  Eigen::MatrixXd phi_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  double condition_ = 1.0;
  double l_ = 0.0;
};

}  // namespace ropesway
