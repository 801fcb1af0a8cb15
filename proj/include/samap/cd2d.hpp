#ifndef SAMAP_CD2D_HPP
#define SAMAP_CD2D_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "samap/banded.hpp"
#include "samap/error.hpp"
#include "samap/sequence.hpp"
#include "samap/sparse.hpp"

namespace samap {

// Nonlinear convection-diffusion on the unit square,
//   -div((eta + gamma u^2) grad u) + r u_x + s u_y + t u = f,
// with u(0,y) = 0.2 + y(1 - y^2) and zero Dirichlet data on the other three sides. Central
// differences on an m x m interior grid (h = 1/(m+1)); unknown (i, j) at x = (i+1)h, y = (j+1)h
// has index j*m + i. Half-point diffusivities are arithmetic means of the neighbouring nodal values.

struct Cd2dConfig {
  std::size_t m = 64;
  double eta = 0.1;
  double gamma = 1.0;
  double r = 1.0;
  double s = 1.0;
  double t_coef = 0.0;
  double f_rhs = 0.0;
  double newton_tol = 1e-8;
  std::size_t max_newton = 100;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;

  std::size_t n() const { return m * m; }

  void validate() const {
    if (m < 2) throw InvalidArgument("cd2d: m must be at least 2");
    if (!(eta > 0.0)) throw InvalidArgument("cd2d: eta must be positive");
    if (!(newton_tol > 0.0)) throw InvalidArgument("cd2d: newton_tol must be positive");
    if (max_newton < 1) throw InvalidArgument("cd2d: max_newton must be at least 1");
    if (!(armijo_c > 0.0 && armijo_c < 0.5)) throw InvalidArgument("cd2d: armijo_c must lie in (0, 0.5)");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
      throw InvalidArgument("cd2d: backtrack_factor must lie in (0, 1)");
  }
};

/// Left boundary profile u(0, y).
inline double cd2d_left_boundary(double y) { return 0.2 + y * (1.0 - y * y); }

namespace detail {

struct Cd2dGrid {
  const Cd2dConfig& cfg;
  std::span<const double> u;
  double h;

  // Value at grid node (i, j), with i or j allowed to step one past the interior.
  double value(long i, long j) const {
    const long m = static_cast<long>(cfg.m);
    if (i < 0) return cd2d_left_boundary(static_cast<double>(j + 1) * h);
    if (i >= m || j < 0 || j >= m) return 0.0;
    return u[static_cast<std::size_t>(j * m + i)];
  }
  bool interior(long i, long j) const {
    const long m = static_cast<long>(cfg.m);
    return i >= 0 && i < m && j >= 0 && j < m;
  }
  double kappa(double v) const { return cfg.eta + cfg.gamma * v * v; }
};

struct Neighbor {
  long di, dj;
  double conv; // coefficient multiplying u_Q in the convection term
};

inline std::array<Neighbor, 4> cd2d_neighbors(const Cd2dConfig& cfg, double h) {
  return {{{+1, 0, cfg.r / (2.0 * h)},
           {-1, 0, -cfg.r / (2.0 * h)},
           {0, +1, cfg.s / (2.0 * h)},
           {0, -1, -cfg.s / (2.0 * h)}}};
}

inline void require_state(const Cd2dConfig& cfg, std::span<const double> u) {
  if (u.size() != cfg.n())
    throw InvalidArgument("cd2d: state has length " + std::to_string(u.size()) + ", expected " +
                          std::to_string(cfg.n()));
}

} // namespace detail

/// F(u) with boundary data folded in.
inline std::vector<double> assemble_cd2d_residual(std::span<const double> u, const Cd2dConfig& cfg) {
  cfg.validate();
  detail::require_state(cfg, u);
  const long m = static_cast<long>(cfg.m);
  const double h = 1.0 / static_cast<double>(cfg.m + 1);
  const double inv_h2 = 1.0 / (h * h);
  const detail::Cd2dGrid g{cfg, u, h};
  const auto nbrs = detail::cd2d_neighbors(cfg, h);

  std::vector<double> f(cfg.n());
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < m; ++i) {
      const double up = g.value(i, j);
      const double kp = g.kappa(up);
      double diffusion = 0.0;
      double convection = 0.0;
      for (const auto& nb : nbrs) {
        const double uq = g.value(i + nb.di, j + nb.dj);
        const double k_half = 0.5 * (kp + g.kappa(uq));
        diffusion += k_half * (up - uq);
        convection += nb.conv * uq;
      }
      f[static_cast<std::size_t>(j * m + i)] = inv_h2 * diffusion + convection + cfg.t_coef * up - cfg.f_rhs;
    }
  }
  return f;
}

/// Analytic Jacobian of assemble_cd2d_residual; five-point pattern.
inline SparseMatrix assemble_cd2d_jacobian(std::span<const double> u, const Cd2dConfig& cfg) {
  cfg.validate();
  detail::require_state(cfg, u);
  const long m = static_cast<long>(cfg.m);
  const double h = 1.0 / static_cast<double>(cfg.m + 1);
  const double inv_h2 = 1.0 / (h * h);
  const detail::Cd2dGrid g{cfg, u, h};
  const auto nbrs = detail::cd2d_neighbors(cfg, h);

  std::vector<Triplet> trip;
  trip.reserve(5 * cfg.n());
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < m; ++i) {
      const auto row = static_cast<std::size_t>(j * m + i);
      const double up = g.value(i, j);
      const double kp = g.kappa(up);
      double diag = cfg.t_coef;
      for (const auto& nb : nbrs) {
        const long qi = i + nb.di;
        const long qj = j + nb.dj;
        const double uq = g.value(qi, qj);
        const double k_half = 0.5 * (kp + g.kappa(uq));
        // d(k_half)/du = gamma * u at either end point
        diag += inv_h2 * (k_half + cfg.gamma * up * (up - uq));
        if (g.interior(qi, qj)) {
          const double off = inv_h2 * (-k_half + cfg.gamma * uq * (up - uq)) + nb.conv;
          trip.push_back({row, static_cast<std::size_t>(qj * m + qi), off});
        }
      }
      trip.push_back({row, row, diag});
    }
  }
  return SparseMatrix::from_triplets(cfg.n(), cfg.n(), trip);
}

/// Newton iteration history and the Jacobian sequence it produced.
struct Cd2dRun {
  MatrixSequence sequence;
  /// ||F(u^(k))||_2 for k = 0..K (one more than the number of Jacobians when converged).
  std::vector<double> residual_norms;
  /// Accepted line-search step lengths.
  std::vector<double> step_lengths;
  std::vector<double> solution;
  bool converged = false;
};

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Damped Newton from u = 0 with Armijo backtracking on (1/2)||F||^2; emits J(u^(k)) for every
/// iterate that still needs a step. Stops when ||F||_2 < newton_tol. Returns a partial run with
/// converged = false if max_newton steps were taken; throws NumericalError if the step length falls
/// below 1e-12.
inline Cd2dRun generate_cd2d_sequence(const Cd2dConfig& cfg) {
  cfg.validate();
  std::vector<double> u(cfg.n(), 0.0);
  std::vector<double> f = assemble_cd2d_residual(u, cfg);
  double norm = euclidean_norm(f);

  Cd2dRun run;
  run.residual_norms.push_back(norm);
  std::vector<SparseMatrix> mats;
  std::vector<std::string> labels;

  for (std::size_t it = 0; it < cfg.max_newton && !(norm < cfg.newton_tol); ++it) {
    SparseMatrix jac = assemble_cd2d_jacobian(u, cfg);
    std::vector<double> rhs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
    const std::vector<double> delta = BandedLu(jac).solve(rhs);
    mats.push_back(std::move(jac));
    labels.push_back("J_" + std::to_string(it));

    const double phi0 = 0.5 * norm * norm;
    double alpha = 1.0;
    std::vector<double> trial(u.size());
    for (;;) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + alpha * delta[i];
      f = assemble_cd2d_residual(trial, cfg);
      const double trial_norm = euclidean_norm(f);
      // grad(phi) . delta = -||F||^2 = -2 phi0 for the Newton direction
      if (0.5 * trial_norm * trial_norm <= (1.0 - 2.0 * cfg.armijo_c * alpha) * phi0) {
        norm = trial_norm;
        break;
      }
      alpha *= cfg.backtrack_factor;
      if (alpha < 1e-12)
        throw NumericalError("cd2d: line search failed at Newton step " + std::to_string(it) +
                             " (||F|| = " + std::to_string(run.residual_norms.back()) + ")");
    }
    u.swap(trial);
    run.step_lengths.push_back(alpha);
    run.residual_norms.push_back(norm);
  }
  run.converged = norm < cfg.newton_tol;
  run.solution = std::move(u);
  run.sequence = MatrixSequence(std::move(mats), std::move(labels));
  return run;
}

} // namespace samap

#endif // SAMAP_CD2D_HPP
