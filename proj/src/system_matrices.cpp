#include "ropesway/system_matrices.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ropesway {
namespace {

// Closed-form integrals over (0,1) for the orthonormal sine family
// psi_j = sqrt(2) sin(j pi xi). Indices are 1-based mode numbers.

// \int (1-xi) psi_i' psi_j'
double int_wedge_dpsi_dpsi(int i, int j) {
  if (i == j) return 0.5 * i * i * M_PI * M_PI;
  if ((i + j) % 2 == 0) return 0.0;
  const double dm = i - j, dp = i + j;
  return 2.0 * i * j * (1.0 / (dm * dm) + 1.0 / (dp * dp));
}

// \int (1-xi)^2 psi_i' psi_j'
double int_wedge2_dpsi_dpsi(int i, int j) {
  if (i == j) return i * i * M_PI * M_PI / 3.0 + 0.5;
  const double dm = i - j, dp = i + j;
  return 2.0 * i * j * (1.0 / (dm * dm) + 1.0 / (dp * dp));
}

// \int (1-xi) psi_i psi_j'
double int_wedge_psi_dpsi(int i, int j) {
  if (i == j) return 0.5;
  return 2.0 * static_cast<double>(i) * j /
         (static_cast<double>(i) * i - static_cast<double>(j) * j);
}

// \int xi psi_i psi_j'
double int_xi_psi_dpsi(int i, int j) {
  if (i == j) return -0.5;
  const double v = 2.0 * static_cast<double>(i) * j /
                   (static_cast<double>(i) * i - static_cast<double>(j) * j);
  return (i + j) % 2 == 1 ? v : -v;
}

// \int psi_i' psi_j'
double int_dpsi_dpsi(int i, int j) {
  return i == j ? i * i * M_PI * M_PI : 0.0;
}

double int_psi(int i) {
  return std::sqrt(2.0) * (1.0 - (i % 2 == 0 ? 1.0 : -1.0)) / (i * M_PI);
}

double int_psi_xi(int i) {
  return std::sqrt(2.0) * (i % 2 == 0 ? -1.0 : 1.0) / (i * M_PI);
}

struct Integrals {
  Eigen::MatrixXd wedge_dd;    // (1-xi) psi' psi'
  Eigen::MatrixXd wedge2_dd;   // (1-xi)^2 psi' psi'
  Eigen::MatrixXd dd;          // psi' psi'
  Eigen::MatrixXd wedge_pd;    // (1-xi) psi psi'
  Eigen::MatrixXd xi_pd;       // xi psi psi'
  Eigen::VectorXd p;           // psi
  Eigen::VectorXd xi_p;        // xi psi
};

Integrals analytic_integrals(int n) {
  Integrals I;
  I.wedge_dd.resize(n, n);
  I.wedge2_dd.resize(n, n);
  I.dd.resize(n, n);
  I.wedge_pd.resize(n, n);
  I.xi_pd.resize(n, n);
  I.p.resize(n);
  I.xi_p.resize(n);
  for (int i = 1; i <= n; ++i) {
    I.p(i - 1) = int_psi(i);
    I.xi_p(i - 1) = int_psi_xi(i);
    for (int j = 1; j <= n; ++j) {
      I.wedge_dd(i - 1, j - 1) = int_wedge_dpsi_dpsi(i, j);
      I.wedge2_dd(i - 1, j - 1) = int_wedge2_dpsi_dpsi(i, j);
      I.dd(i - 1, j - 1) = int_dpsi_dpsi(i, j);
      I.wedge_pd(i - 1, j - 1) = int_wedge_psi_dpsi(i, j);
      I.xi_pd(i - 1, j - 1) = int_xi_psi_dpsi(i, j);
    }
  }
  return I;
}

Integrals quadrature_integrals(const ModalBasis& b) {
  const GaussLegendre quad;
  const int n = b.count();
  Integrals I;
  I.wedge_dd.resize(n, n);
  I.wedge2_dd.resize(n, n);
  I.dd.resize(n, n);
  I.wedge_pd.resize(n, n);
  I.xi_pd.resize(n, n);
  I.p.resize(n);
  I.xi_p.resize(n);
  for (int i = 1; i <= n; ++i) {
    I.p(i - 1) = quad.integrate([&](double x) { return b.psi(i, x); });
    I.xi_p(i - 1) = quad.integrate([&](double x) { return x * b.psi(i, x); });
    for (int j = 1; j <= n; ++j) {
      I.wedge_dd(i - 1, j - 1) = quad.integrate(
          [&](double x) { return (1.0 - x) * b.dpsi(i, x) * b.dpsi(j, x); });
      I.wedge2_dd(i - 1, j - 1) = quad.integrate([&](double x) {
        return (1.0 - x) * (1.0 - x) * b.dpsi(i, x) * b.dpsi(j, x);
      });
      I.dd(i - 1, j - 1) =
          quad.integrate([&](double x) { return b.dpsi(i, x) * b.dpsi(j, x); });
      I.wedge_pd(i - 1, j - 1) = quad.integrate(
          [&](double x) { return (1.0 - x) * b.psi(i, x) * b.dpsi(j, x); });
      I.xi_pd(i - 1, j - 1) = quad.integrate(
          [&](double x) { return x * b.psi(i, x) * b.dpsi(j, x); });
    }
  }
  return I;
}

}  // namespace

double tension(const RopeParams& p, const KinematicState& kin, double y) {
  if (y < 0.0 || y > p.l)
    throw DomainError("tension: station y outside [0, l]");
  return (p.m_eff() + p.rho * (p.l - y)) * (p.g - kin.l_ddot) +
         0.5 * p.M_cs * p.g;
}

STerms s_terms(const RopeParams& p, const KinematicState& kin,
               const BoundaryMotion& bm) {
  const double l = p.l, ld = kin.l_dot, ldd = kin.l_ddot;
  const double l2 = l * l, l3 = l2 * l, l4 = l3 * l;
  STerms s;
  s.s1 = (l * ldd - 2.0 * ld * ld) / l3 * bm.f1 + 2.0 * ld / l2 * bm.f1_dot +
         (l3 * bm.f2_ddot - bm.f2 * l2 * ldd + 2.0 * l * ld * ld * bm.f2 -
          2.0 * l2 * ld * bm.f2_dot) /
             l4 -
         bm.f1_ddot / l;
  s.s2 = ld / l2 * bm.f1 - bm.f1_dot / l + bm.f2_dot / l - bm.f2 * ld / l2;
  s.s3 = (bm.f2 - bm.f1) / l;
  // G = rho*a - dT/dy + c_p*v; the tension gradient is -rho*(g - a), so the
  // acceleration parts cancel and G = rho*g + c_p*l_dot.
  s.G = p.rho * p.g + p.c_p * ld;
  s.s4 = -2.0 * ld * p.rho * s.s2 - s.G * s.s3 - p.c_p * bm.f1_dot;
  return s;
}

SystemMatrices assemble_matrices(const RopeParams& p, const KinematicState& kin,
                                 const ModalBasis& basis, AssemblyPath path) {
  p.validate();
  kin.validate();
  const int n = basis.count();
  if (n < 1) throw ConfigError("modes.count must be >= 1");

  const bool analytic = path == AssemblyPath::analytic ||
                        (path == AssemblyPath::automatic && basis.has_closed_forms());
  if (analytic && !basis.has_closed_forms())
    throw ConfigError("analytic assembly requires the sine basis");
  // The sine family is orthonormal by construction; anything user-supplied
  // must prove it before the reduced model makes sense.
  if (!basis.has_closed_forms()) basis.validate(GaussLegendre{});
  const Integrals I =
      analytic ? analytic_integrals(n) : quadrature_integrals(basis);

  SystemMatrices m;
  m.params = p;
  m.kin = kin;
  m.basis = basis;
  m.int_psi = I.p;
  m.int_psi_xi = I.xi_p;

  const double l = p.l, ld = kin.l_dot, ldd = kin.l_ddot, a = kin.l_ddot;
  const double rho = p.rho;
  const double xi_dp = p.xi_dp();
  m.psi_dp.resize(n);
  Eigen::VectorXd dpsi_dp(n);
  for (int i = 1; i <= n; ++i) {
    m.psi_dp(i - 1) = basis.psi(i, xi_dp);
    dpsi_dp(i - 1) = basis.dpsi(i, xi_dp);
  }

  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(n, n);

  m.M = rho * Id;

  m.C = rho / l * ld * (2.0 * I.wedge_pd - Id) + p.c_p * Id;

  m.C_tilde = (m.psi_dp * m.psi_dp.transpose()) / l;

  m.K = 0.25 * rho / (l * l) * ld * ld * Id -
        rho / (l * l) * ld * ld * I.wedge2_dd +
        rho / l * (p.g - a) * I.wedge_dd +
        p.m_eff() / (l * l) * (p.g - a) * I.dd +
        rho * (ld * ld / (l * l) - ldd / l) * (0.5 * Id - I.wedge_pd) -
        p.c_p * ld / l * (I.xi_pd + 0.5 * Id) +
        0.5 * p.M_cs * p.g / (l * l) * I.dd;

  m.K_tilde.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.K_tilde(i, j) =
          ld / (l * l) *
          (-dpsi_dp(j) * m.psi_dp(i) * xi_dp -
           0.5 * m.psi_dp(i) * m.psi_dp(j) + dpsi_dp(j) * m.psi_dp(i));

  return m;
}

Forcing eval_forcing(const SystemMatrices& m, const DisturbanceProfile& dist,
                     double t) {
  const RopeParams& p = m.params;
  const BoundaryMotion bm = dist.boundary_motion(p, t);
  const STerms s = s_terms(p, m.kin, bm);
  const double l = p.l, sql = std::sqrt(l), ld = m.kin.l_dot;

  Forcing f;
  f.F = -l * sql * (p.rho * s.s1 + p.c_p * s.s2) * m.int_psi_xi +
        sql * (s.s4 - p.rho * bm.f1_ddot) * m.int_psi;
  f.F_tilde = (bm.f1_dot / sql) * m.psi_dp +
              ((l - p.l_dp) / sql) *
                  (ld / (l * l) * (bm.f1 - bm.f2) +
                   (bm.f2_dot - bm.f1_dot) / l) *
                  m.psi_dp;
  return f;
}

double sway_at(double y, const Eigen::VectorXd& q, const RopeParams& p,
               const ModalBasis& basis, const BoundaryMotion& bm) {
  if (y < 0.0 || y > p.l) throw DomainError("sway_at: station y outside [0, l]");
  if (q.size() != basis.count())
    throw DomainError("sway_at: q size does not match the basis");
  const double xi = y / p.l;
  double w = 0.0;
  for (int j = 1; j <= basis.count(); ++j)
    w += q(j - 1) * basis.psi(j, xi);
  w /= std::sqrt(p.l);
  return w + (p.l - y) / p.l * bm.f1 + y / p.l * bm.f2;
}

double sway_at(double y, const Eigen::VectorXd& q, const RopeParams& p,
               const ModalBasis& basis, const DisturbanceProfile& dist,
               double t) {
  return sway_at(y, q, p, basis, dist.boundary_motion(p, t));
}

Eigen::VectorXd natural_frequencies_hz(const SystemMatrices& mats) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(mats.K, mats.M);
  if (es.info() != Eigen::Success)
    throw DomainError("natural_frequencies_hz: eigensolve failed");
  Eigen::VectorXd f = es.eigenvalues();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) < 0.0)
      throw DomainError("natural_frequencies_hz: stiffness is not positive definite");
    f(i) = std::sqrt(f(i)) / (2.0 * M_PI);
  }
  return f;
}

void matrices_to_csv(const SystemMatrices& m, std::ostream& os) {
  const auto dump = [&os](const char* name, const Eigen::MatrixXd& a) {
    os << name << "\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (j) os << ",";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
        os << buf;
      }
      os << "\n";
    }
  };
  dump("M", m.M);
  dump("C", m.C);
  dump("C_tilde", m.C_tilde);
  dump("K", m.K);
  dump("K_tilde", m.K_tilde);
}

}  // namespace ropesway
