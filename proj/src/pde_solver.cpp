#include "ropesway/pde_solver.hpp"

#include <algorithm>
#include <cmath>

#include "ropesway/errors.hpp"
#include "ropesway/system_matrices.hpp"

namespace ropesway {

double PdeSolver::cfl_limit(const RopeParams& p, const KinematicState& kin,
                            int n_cells, double cfl) {
  const double dy = p.l / n_cells;
  const double t_max = tension(p, kin, 0.0);  // tension peaks at the top
  return cfl * dy / std::sqrt(t_max / p.rho);
}

PdeSolver::PdeSolver(const RopeParams& params, const KinematicState& kin,
                     const FdOptions& opts, const DisturbanceProfile& dist)
    : p_(params), kin_(kin), dist_(dist), n_(opts.n_cells) {
  p_.validate();
  kin_.validate();
  if (n_ < 8) throw ConfigError("pde.n_cells must be >= 8");
  if (!(opts.cfl > 0.0 && opts.cfl <= 1.0))
    throw ConfigError("pde.cfl must lie in (0, 1]");
  dy_ = p_.l / n_;

  const double limit = cfl_limit(p_, kin_, n_, opts.cfl);
  if (opts.dt_pde == 0.0) {
    dt_ = limit;
  } else {
    if (!(opts.dt_pde > 0.0)) throw ConfigError("pde.dt_pde must be > 0");
    if (opts.dt_pde > limit * (1.0 + 1e-12))
      throw ConfigError("pde.dt_pde violates the CFL stability bound");
    dt_ = opts.dt_pde;
  }

  w_.assign(n_ + 1, 0.0);
  w_prev_.assign(n_ + 1, 0.0);
  w_pprev_.assign(n_ + 1, 0.0);

  t_half_.resize(n_);
  for (int i = 0; i < n_; ++i)
    t_half_[i] = tension(p_, kin_, (i + 0.5) * dy_);

  // Regularized Dirac at the damper station: weights integrate to 1.
  dirac_.assign(n_ + 1, 0.0);
  const double y_dp = p_.l - p_.l_dp;
  const int j = std::clamp(static_cast<int>(std::lround(y_dp / dy_)), 1, n_ - 1);
  if (opts.dirac == DiracShape::single_cell) {
    dirac_[j] = 1.0 / dy_;
  } else {
    dirac_[j] = 0.5 / dy_;
    if (j - 1 >= 1) dirac_[j - 1] = 0.25 / dy_;
    if (j + 1 <= n_ - 1) dirac_[j + 1] = 0.25 / dy_;
  }
}

double PdeSolver::source(int node, double U, const BoundaryMotion& bm) const {
  // Lifting w = u - h with h(y,t) = (1 - y/l) f1 + (y/l) f2 moves the end
  // motion into interior forcing: -rho h_tt + T_y h_y - (c_p + U δ̂) h_t.
  const double y = node * dy_;
  const double h_t = (1.0 - y / p_.l) * bm.f1_dot + y / p_.l * bm.f2_dot;
  const double h_tt = (1.0 - y / p_.l) * bm.f1_ddot + y / p_.l * bm.f2_ddot;
  const double h_y = (bm.f2 - bm.f1) / p_.l;
  const double t_y = -p_.rho * (p_.g - kin_.l_ddot);
  return -p_.rho * h_tt + t_y * h_y - (p_.c_p + U * dirac_[node]) * h_t;
}

void PdeSolver::set_initial(const std::function<double(double)>& w0,
                            const std::function<double(double)>& v0) {
  std::vector<double> v(n_ + 1, 0.0);
  for (int i = 1; i < n_; ++i) {
    w_[i] = w0(i * dy_);
    v[i] = v0(i * dy_);
  }
  w_[0] = w_[n_] = 0.0;
  t_ = 0.0;
  steps_ = 0;

  // Fictitious previous level from a backward Taylor step so the first
  // leapfrog update is second-order accurate.
  const BoundaryMotion bm = dist_.boundary_motion(p_, 0.0);
  for (int i = 1; i < n_; ++i) {
    const double flux =
        (t_half_[i] * (w_[i + 1] - w_[i]) - t_half_[i - 1] * (w_[i] - w_[i - 1])) /
        (dy_ * dy_);
    const double beta = p_.c_p;  // U enters only from advance() onwards
    const double acc =
        (flux + source(i, 0.0, bm) - beta * v[i]) / p_.rho;
    w_prev_[i] = w_[i] - dt_ * v[i] + 0.5 * dt_ * dt_ * acc;
  }
  w_prev_[0] = w_prev_[n_] = 0.0;
  w_pprev_ = w_prev_;
}

void PdeSolver::advance(double U) {
  const BoundaryMotion bm = dist_.boundary_motion(p_, t_);
  std::vector<double> next(n_ + 1, 0.0);
  const double r = p_.rho / (dt_ * dt_);
  for (int i = 1; i < n_; ++i) {
    const double flux =
        (t_half_[i] * (w_[i + 1] - w_[i]) - t_half_[i - 1] * (w_[i] - w_[i - 1])) /
        (dy_ * dy_);
    const double beta = p_.c_p + U * dirac_[i];
    const double b = beta / (2.0 * dt_);
    next[i] = (flux + source(i, U, bm) + r * (2.0 * w_[i] - w_prev_[i]) +
               b * w_prev_[i]) /
              (r + b);
    if (!std::isfinite(next[i]))
      throw IntegrationError("finite-difference state became non-finite",
                             steps_);
  }
  w_pprev_.swap(w_prev_);
  w_prev_.swap(w_);
  w_.swap(next);
  t_ += dt_;
  ++steps_;
}

double PdeSolver::probe(double y) const {
  if (y < 0.0 || y > p_.l) throw DomainError("probe: station y outside [0, l]");
  const double s = y / dy_;
  const int i = std::min(static_cast<int>(s), n_ - 1);
  const double frac = s - i;
  const double w = (1.0 - frac) * w_[i] + frac * w_[i + 1];
  const BoundaryMotion bm = dist_.boundary_motion(p_, t_);
  return w + (1.0 - y / p_.l) * bm.f1 + y / p_.l * bm.f2;
}

double PdeSolver::energy() const {
  // Energy of the level at t - dt: centred velocity (w - w_pprev)/(2 dt),
  // strain from the w_prev gradients.
  double kinetic = 0.0, strain = 0.0;
  for (int i = 1; i < n_; ++i) {
    const double v = (w_[i] - w_pprev_[i]) / (2.0 * dt_);
    kinetic += 0.5 * p_.rho * v * v * dy_;
  }
  for (int i = 0; i < n_; ++i) {
    const double grad = (w_prev_[i + 1] - w_prev_[i]) / dy_;
    strain += 0.5 * t_half_[i] * grad * grad * dy_;
  }
  return kinetic + strain;
}

PdeCompareReport compare_modal_vs_pde(const ScenarioSpec& scenario,
                                      const FdOptions& grid, double duration,
                                      double dt_sample) {
  if (!(duration > 0.0) || !(dt_sample > 0.0))
    throw ConfigError("pde.compare duration and sample interval must be > 0");

  const ModalBasis basis = ModalBasis::sine(scenario.modes);
  const SystemMatrices mats =
      assemble_matrices(scenario.params, scenario.kin, basis);

  // FD step fitted under the stability bound so samples land on steps.
  FdOptions opts = grid;
  const double limit =
      PdeSolver::cfl_limit(scenario.params, scenario.kin, grid.n_cells,
                           grid.cfl);
  const int per_sample = std::max(1, static_cast<int>(std::ceil(
                                          dt_sample / limit - 1e-12)));
  opts.dt_pde = dt_sample / per_sample;

  PdeSolver fd(scenario.params, scenario.kin, opts, scenario.disturbance);

  Eigen::VectorXd q0 = scenario.options.q0, qd0 = scenario.options.qd0;
  if (q0.size() == 0) q0 = Eigen::VectorXd::Zero(scenario.modes);
  if (qd0.size() == 0) qd0 = Eigen::VectorXd::Zero(scenario.modes);
  const double sql = std::sqrt(scenario.params.l);
  fd.set_initial(
      [&](double y) {
        double acc = 0.0;
        for (int j = 1; j <= scenario.modes; ++j)
          acc += q0(j - 1) * basis.psi(j, y / scenario.params.l) / sql;
        return acc;
      },
      [&](double y) {
        double acc = 0.0;
        for (int j = 1; j <= scenario.modes; ++j)
          acc += qd0(j - 1) * basis.psi(j, y / scenario.params.l) / sql;
        return acc;
      });

  const ForcingFn forcing = [&](double t) {
    return eval_forcing(mats, scenario.disturbance, t);
  };

  // Modal substeps per sample: reuse the scenario dt when it divides the
  // sample interval, otherwise refine.
  const int modal_per =
      std::max(1, static_cast<int>(std::lround(dt_sample / scenario.options.dt)));
  const double modal_dt = dt_sample / modal_per;

  ModalState state;
  state.t = 0.0;
  state.q = q0;
  state.qd = qd0;

  PdeCompareReport rep;
  const long samples = std::llround(duration / dt_sample);
  rep.t.reserve(samples + 1);
  double err_sq_sum = 0.0, ref_sq_sum = 0.0;
  double tail_sum = 0.0, total_sum = 0.0;
  const double probe_y = scenario.options.probe_y;

  for (long k = 0; k <= samples; ++k) {
    const double t = k * dt_sample;
    const double modal_w =
        sway_at(probe_y, state.q, scenario.params, basis,
                scenario.disturbance, t);
    const double fd_w = fd.probe(probe_y);
    rep.t.push_back(t);
    rep.modal_trace.push_back(modal_w);
    rep.pde_trace.push_back(fd_w);
    rep.peak = std::max(rep.peak, std::abs(modal_w));
    rep.linf = std::max(rep.linf, std::abs(modal_w - fd_w));
    err_sq_sum += (modal_w - fd_w) * (modal_w - fd_w);
    ref_sq_sum += modal_w * modal_w;

    double tail = 0.0, total = 0.0;
    for (int j = 0; j < scenario.modes; ++j) {
      const double e = 0.5 * mats.M(j, j) * state.qd(j) * state.qd(j) +
                       0.5 * mats.K(j, j) * state.q(j) * state.q(j);
      total += e;
      if (j > 0) tail += e;
    }
    tail_sum += tail;
    total_sum += total;

    if (k == samples) break;
    for (int s = 0; s < modal_per; ++s)
      state = step(state, mats, 0.0, forcing, modal_dt, k * modal_per + s);
    for (int s = 0; s < per_sample; ++s) fd.advance(0.0);
  }

  rep.linf_rel = rep.peak > 0.0 ? rep.linf / rep.peak : 0.0;
  rep.l2_rel = ref_sq_sum > 0.0 ? std::sqrt(err_sq_sum / ref_sq_sum) : 0.0;
  rep.tail_mode_energy_frac =
      total_sum > 0.0 ? tail_sum / total_sum : 0.0;
  return rep;
}

}  // namespace ropesway
