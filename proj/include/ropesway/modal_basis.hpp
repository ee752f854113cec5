#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ropesway/errors.hpp"

namespace ropesway {

/// Fixed-order Gauss–Legendre rule on [0, 1]. 64 nodes integrate the
/// oscillatory basis products used here to full double precision.
struct GaussLegendre {
  std::vector<double> nodes;    // in (0, 1)
  std::vector<double> weights;  // sum to 1

  explicit GaussLegendre(int n = 64);

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// Shape family psi_j(xi) on the unit interval, j = 1..count, required to be
/// orthonormal in L2(0,1) and to vanish at both ends. The default family is
/// psi_j(xi) = sqrt(2) sin(j pi xi), for which every assembly integral has a
/// closed form; a user-supplied family falls back to quadrature assembly.
class ModalBasis {
 public:
  using ShapeFn = std::function<double(int j, double xi)>;

  static ModalBasis sine(int count) {
    ModalBasis b;
    b.count_ = count;
    b.sine_ = true;
    return b;
  }

  static ModalBasis custom(int count, ShapeFn psi, ShapeFn dpsi) {
    ModalBasis b;
    b.count_ = count;
    b.sine_ = false;
    b.psi_ = std::move(psi);
    b.dpsi_ = std::move(dpsi);
    return b;
  }

  int count() const { return count_; }
  bool has_closed_forms() const { return sine_; }

  double psi(int j, double xi) const {
    return sine_ ? std::sqrt(2.0) * std::sin(j * M_PI * xi) : psi_(j, xi);
  }
  double dpsi(int j, double xi) const {
    return sine_ ? std::sqrt(2.0) * j * M_PI * std::cos(j * M_PI * xi)
                 : dpsi_(j, xi);
  }

  /// max_ij |  <psi_i, psi_j>  - delta_ij | by quadrature.
  double orthonormality_error(const GaussLegendre& quad) const {
    double worst = 0.0;
    for (int i = 1; i <= count_; ++i)
      for (int j = i; j <= count_; ++j) {
        const double v =
            quad.integrate([&](double xi) { return psi(i, xi) * psi(j, xi); });
        worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
      }
    return worst;
  }

  void validate(const GaussLegendre& quad, double tol = 1e-10) const {
    if (count_ < 1) throw ConfigError("modes.count must be >= 1");
    const double err = orthonormality_error(quad);
    if (err > tol)
      throw ConfigError("basis is not orthonormal on (0,1): max deviation " +
                        std::to_string(err));
  }

 private:
  int count_ = 0;
  bool sine_ = true;
  ShapeFn psi_, dpsi_;
};

}  // namespace ropesway
