#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ropesway/errors.hpp"

namespace ropesway {

// Damper drive electronics: integer transport delay in control samples,
// first-order low-pass on the delayed command, then a clamp to [0, u_max].
struct ActuatorModel {
  double cutoff_hz = 10.0;
  int delay_steps = 5;
  bool enabled = true;  // false = ideal actuation (clamp only)

  void validate() const {
    if (!(cutoff_hz > 0.0))
      throw ConfigError("actuator.cutoff_hz must be > 0");
    if (delay_steps < 0)
      throw ConfigError("actuator.delay_steps must be >= 0");
  }
};

class ActuatorChain {
 public:
  ActuatorChain(const ActuatorModel& model, double dt_control, double u_max)
      : model_(model),
        u_max_(u_max),
        alpha_(std::exp(-2.0 * M_PI * model.cutoff_hz * dt_control)),
        ring_(static_cast<std::size_t>(std::max(model.delay_steps, 0)), 0.0) {
    model.validate();
    if (!(dt_control > 0.0))
      throw ConfigError("sim.dt_control must be > 0");
  }

  // One control sample through the chain.
  double apply(double u_commanded) {
    if (!model_.enabled)
      return std::clamp(u_commanded, 0.0, u_max_);
    double delayed = u_commanded;
    if (!ring_.empty()) {
      delayed = ring_[head_];
      ring_[head_] = u_commanded;
      head_ = (head_ + 1) % ring_.size();
    }
    state_ = alpha_ * state_ + (1.0 - alpha_) * delayed;
    return std::clamp(state_, 0.0, u_max_);
  }

  void reset() {
    std::fill(ring_.begin(), ring_.end(), 0.0);
    head_ = 0;
    state_ = 0.0;
  }

  double alpha() const { return alpha_; }

 private:
  ActuatorModel model_;
  double u_max_;
  double alpha_;
  std::vector<double> ring_;
  std::size_t head_ = 0;
  double state_ = 0.0;
};

}  // namespace ropesway
