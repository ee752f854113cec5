#pragma once

#include <Eigen/Dense>

namespace ropesway {

// Instantaneous state of the reduced model: generalized coordinates and
// velocities, plus the simulation clock.
struct ModalState {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd qd;

  static ModalState zero(int modes, double t0 = 0.0) {
    ModalState s;
    s.t = t0;
    s.q = Eigen::VectorXd::Zero(modes);
    s.qd = Eigen::VectorXd::Zero(modes);
    return s;
  }
};

}  // namespace ropesway
