#pragma once

#include <cmath>
#include <vector>

#include "ropesway/rope_params.hpp"

namespace ropesway {

/// Building-sway factor relating the displacement at the car level to the
/// displacement at the machine room: a building bending mode evaluated at
/// height H - l gives f2 = f1 * sin(pi*(H - l)/(2*H)). Constant while the
/// suspended length is constant, so the same factor scales f2_dot, f2_ddot.
inline double boundary_sway_factor(const RopeParams& p) {
  return std::sin(M_PI * (p.H - p.l) / (2.0 * p.H));
}

/// Car-level boundary displacement derived from the machine-room one.
inline double derive_f2(double f1_value, const RopeParams& p) {
  return f1_value * boundary_sway_factor(p);
}

/// Top boundary displacement f1(t) and its first two time derivatives.
struct BoundarySignal {
  double f1 = 0.0, f1_dot = 0.0, f1_ddot = 0.0;
};

/// Both rope-end displacements with derivatives, ready for the forcing terms.
struct BoundaryMotion {
  double f1 = 0.0, f1_dot = 0.0, f1_ddot = 0.0;
  double f2 = 0.0, f2_dot = 0.0, f2_ddot = 0.0;
};

enum class DisturbanceKind { zero, sinusoid, sampled };

/// Machine-room horizontal displacement profile f1(t). The sampled variant
/// interpolates a (t, f1) table linearly; its derivatives use the segment
/// slope and a zero second derivative, which is adequate for slowly varying
/// recorded data but not for spectrum-accurate replay.
class DisturbanceProfile {
 public:
  static DisturbanceProfile zero() { return DisturbanceProfile{}; }

  static DisturbanceProfile sinusoid(double amplitude, double frequency_hz,
                                     double phase = 0.0) {
    DisturbanceProfile d;
    d.kind_ = DisturbanceKind::sinusoid;
    d.amplitude_ = amplitude;
    d.freq_hz_ = frequency_hz;
    d.phase_ = phase;
    return d;
  }

  static DisturbanceProfile sampled(std::vector<double> times,
                                    std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
      throw ConfigError("disturbance.sampled needs >= 2 (t, f1) pairs");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw ConfigError("disturbance.sampled times must increase strictly");
    DisturbanceProfile d;
    d.kind_ = DisturbanceKind::sampled;
    d.times_ = std::move(times);
    d.values_ = std::move(values);
    return d;
  }

  DisturbanceKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double frequency_hz() const { return freq_hz_; }

  BoundarySignal eval(double t) const {
    BoundarySignal s;
    switch (kind_) {
      case DisturbanceKind::zero:
        break;
      case DisturbanceKind::sinusoid: {
        const double omega = 2.0 * M_PI * freq_hz_;
        const double a = omega * t + phase_;
        s.f1 = amplitude_ * std::sin(a);
        s.f1_dot = amplitude_ * omega * std::cos(a);
        s.f1_ddot = -amplitude_ * omega * omega * std::sin(a);
        break;
      }
      case DisturbanceKind::sampled: {
        // Clamp outside the table; secant slope inside.
        if (t <= times_.front()) {
          s.f1 = values_.front();
        } else if (t >= times_.back()) {
          s.f1 = values_.back();
        } else {
          std::size_t hi = 1;
          while (times_[hi] < t) ++hi;
          const double w = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
          s.f1 = values_[hi - 1] + w * (values_[hi] - values_[hi - 1]);
          s.f1_dot =
              (values_[hi] - values_[hi - 1]) / (times_[hi] - times_[hi - 1]);
        }
        break;
      }
    }
    return s;
  }

  /// f1 and derived f2 with time derivatives; static suspended length makes
  /// the f2 scaling factor constant.
  BoundaryMotion boundary_motion(const RopeParams& p, double t) const {
    const BoundarySignal s = eval(t);
    const double k = boundary_sway_factor(p);
    return BoundaryMotion{s.f1,      s.f1_dot,     s.f1_ddot,
                          k * s.f1,  k * s.f1_dot, k * s.f1_ddot};
  }

 private:
  DisturbanceKind kind_ = DisturbanceKind::zero;
  double amplitude_ = 0.0, freq_hz_ = 0.0, phase_ = 0.0;
  std::vector<double> times_, values_;
};

}  // namespace ropesway
