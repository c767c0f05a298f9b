#pragma once

#include "mmlaw/error.hpp"
#include "mmlaw/pareto.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace mmlaw {

/// Saturating power law  loss(P) = A * P^(-alpha) + L_inf, P in billions of parameters.
template <typename Scalar>
struct ScalingFit {
  Scalar A{};
  Scalar alpha{};
  Scalar L_inf{};
  Scalar rss{};
  std::size_t n_points = 0;
  bool converged = false;
  std::size_t iterations = 0;
};

template <typename Scalar>
struct FitConfig {
  std::size_t max_iterations = 200;
  Scalar rel_tolerance = Scalar(1e-10);  // on relative RSS change
  std::vector<Scalar> multistart_floor_grid{Scalar(0), Scalar(0.5), Scalar(0.8),
                                            Scalar(0.9), Scalar(0.95), Scalar(0.99)};
  Scalar A_min = Scalar(1e-12);
  Scalar alpha_min = Scalar(1e-6);
  Scalar alpha_max = Scalar(5);
  // Levenberg-Marquardt damping schedule.
  Scalar initial_damping = Scalar(1e-3);
  Scalar damping_increase = Scalar(10);
  Scalar damping_decrease = Scalar(10);
  Scalar max_damping = Scalar(1e16);
  // L_inf is kept in [0, min loss - floor_margin].
  Scalar floor_margin = Scalar(1e-9);

  void validate() const {
    const bool ok = max_iterations > 0 && rel_tolerance > 0 && A_min > 0 && alpha_min > 0 &&
                    alpha_max >= alpha_min && initial_damping > 0 && damping_increase > 1 &&
                    damping_decrease > 1 && max_damping > initial_damping && floor_margin >= 0 &&
                    !multistart_floor_grid.empty() &&
                    std::all_of(multistart_floor_grid.begin(), multistart_floor_grid.end(),
                                [](Scalar f) { return f >= 0 && f < 1; });
    if (!ok) throw Error(ErrorKind::InvalidFitConfig, "bounds, tolerances and floor grid must be valid");
  }
};

template <typename Scalar>
struct InitialGuess {
  Scalar A{};
  Scalar alpha{};
  Scalar L_inf{};
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline Scalar power_law(Scalar A, Scalar alpha, Scalar L_inf, Scalar budget) {
  using std::pow;
  return A * pow(budget, -alpha) + L_inf;
}

/// Throws "invalid budget" for P <= 0.
template <typename Scalar>
Scalar predict(const ScalingFit<Scalar>& fit, Scalar budget) {
  if (!(budget > 0)) throw Error(ErrorKind::InvalidBudget, "P must be positive");
  return power_law(fit.A, fit.alpha, fit.L_inf, budget);
}

/// Residuals f(P_i) - loss_i.
template <typename Scalar>
VectorX<Scalar> power_law_residuals(const VectorX<Scalar>& budgets, const VectorX<Scalar>& losses,
                                    Scalar A, Scalar alpha, Scalar L_inf) {
  VectorX<Scalar> r(budgets.size());
  for (Eigen::Index i = 0; i < budgets.size(); ++i) {
    r(i) = power_law(A, alpha, L_inf, budgets(i)) - losses(i);
  }
  return r;
}

/// n x 3 Jacobian of the residuals w.r.t. (A, alpha, L_inf):
///   dA = P^-alpha,  dalpha = -A ln(P) P^-alpha,  dL_inf = 1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 3> power_law_jacobian(const VectorX<Scalar>& budgets,
                                                            Scalar A, Scalar alpha) {
  using std::log;
  using std::pow;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> J(budgets.size(), 3);
  for (Eigen::Index i = 0; i < budgets.size(); ++i) {
    const Scalar w = pow(budgets(i), -alpha);
    J(i, 0) = w;
    J(i, 1) = -A * log(budgets(i)) * w;
    J(i, 2) = Scalar(1);
  }
  return J;
}

/// Gradient of RSS = sum r_i^2 w.r.t. (A, alpha, L_inf).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> rss_gradient(const VectorX<Scalar>& budgets, const VectorX<Scalar>& losses,
                                         Scalar A, Scalar alpha, Scalar L_inf) {
  const auto r = power_law_residuals(budgets, losses, A, alpha, L_inf);
  return Scalar(2) * power_law_jacobian(budgets, A, alpha).transpose() * r;
}

namespace detail {

template <typename Scalar>
void check_curve(const VectorX<Scalar>& budgets, const VectorX<Scalar>& losses, std::size_t min_points) {
  using std::isfinite;
  if (budgets.size() != losses.size()) {
    throw Error(ErrorKind::InvalidArgument, "budgets and losses differ in length");
  }
  if (static_cast<std::size_t>(budgets.size()) < min_points) {
    throw Error(ErrorKind::InsufficientPoints,
                std::to_string(budgets.size()) + " < " + std::to_string(min_points));
  }
  for (Eigen::Index i = 0; i < budgets.size(); ++i) {
    if (!(budgets(i) > 0) || !isfinite(budgets(i)) || !isfinite(losses(i))) {
      throw Error(ErrorKind::InvalidPoint, "budget must be positive and values finite");
    }
  }
  if ((budgets.array() == budgets(0)).all()) {
    throw Error(ErrorKind::DegenerateAbscissae, "all budgets are identical");
  }
}

}  // namespace detail

/// Starting point for one multistart run: L_inf0 = floor_fraction * min loss, then
/// ordinary least squares of log(loss - L_inf0) on log(P). Returns nullopt when
/// some loss - L_inf0 <= 0 (infeasible start).
template <typename Scalar>
std::optional<InitialGuess<Scalar>> initialize_params(const VectorX<Scalar>& budgets,
                                                      const VectorX<Scalar>& losses,
                                                      Scalar floor_fraction,
                                                      const FitConfig<Scalar>& config = {}) {
  using std::exp;
  using std::log;
  detail::check_curve(budgets, losses, 2);
  if (!(floor_fraction >= 0 && floor_fraction < 1)) {
    throw Error(ErrorKind::InvalidArgument, "floor_fraction must lie in [0, 1)");
  }
  const Scalar floor = floor_fraction * losses.minCoeff();
  const Eigen::Index n = budgets.size();
  VectorX<Scalar> x(n), z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar gap = losses(i) - floor;
    if (!(gap > 0)) return std::nullopt;
    x(i) = log(budgets(i));
    z(i) = log(gap);
  }
  const Scalar x_mean = x.mean();
  const Scalar z_mean = z.mean();
  const Scalar sxx = (x.array() - x_mean).square().sum();
  const Scalar sxz = ((x.array() - x_mean) * (z.array() - z_mean)).sum();
  const Scalar slope = sxz / sxx;
  const Scalar intercept = z_mean - slope * x_mean;
  return InitialGuess<Scalar>{exp(intercept), std::clamp(-slope, config.alpha_min, config.alpha_max),
                              floor};
}

/// Damped Gauss-Newton (Levenberg-Marquardt) from one start, in the
/// parameterization (log A, alpha, L_inf) with box bounds A >= A_min,
/// alpha in [alpha_min, alpha_max], L_inf in [0, min loss - floor_margin].
/// Coordinates held at a bound by the gradient are frozen for that step.
template <typename Scalar>
ScalingFit<Scalar> fit_from_start(const VectorX<Scalar>& budgets, const VectorX<Scalar>& losses,
                                  const InitialGuess<Scalar>& start,
                                  const FitConfig<Scalar>& config = {}) {
  using std::exp;
  using std::log;
  using std::max;
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

  const Eigen::Index n = budgets.size();
  const Scalar floor_hi = max(Scalar(0), losses.minCoeff() - config.floor_margin);
  VectorX<Scalar> log_p(n);
  for (Eigen::Index i = 0; i < n; ++i) log_p(i) = log(budgets(i));

  const Vec3 lo(log(config.A_min), config.alpha_min, Scalar(0));
  const Vec3 hi(std::numeric_limits<Scalar>::infinity(), config.alpha_max, floor_hi);
  auto project = [&](Vec3 t) {
    for (int j = 0; j < 3; ++j) t(j) = std::clamp(t(j), lo(j), hi(j));
    return t;
  };
  auto residuals = [&](const Vec3& t) {
    const Scalar A = exp(t(0));
    VectorX<Scalar> r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = A * exp(-t(1) * log_p(i)) + t(2) - losses(i);
    return r;
  };

  Vec3 theta = project(Vec3(log(start.A), start.alpha, start.L_inf));
  VectorX<Scalar> r = residuals(theta);
  Scalar rss = r.squaredNorm();
  Scalar lambda = config.initial_damping;
  bool converged = false;
  std::size_t small_steps = 0;
  std::size_t iter = 0;

  // For fixed alpha the model is linear in (A, L_inf); the bounded optimum lies in
  // the interior or on one of the three active edges. Near alpha_min the two
  // columns are almost collinear and plain LM crawls along that valley.
  auto linear_polish = [&]() {
    VectorX<Scalar> w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = exp(-theta(1) * log_p(i));
    const Scalar A_lo = config.A_min;
    auto consider = [&](Scalar A, Scalar L) {
      if (!(A >= A_lo) || !(L >= 0) || !(L <= floor_hi)) return;
      const Vec3 cand(log(A), theta(1), L);
      VectorX<Scalar> cr = residuals(cand);
      const Scalar c_rss = cr.squaredNorm();
      if (c_rss < rss) {
        theta = cand;
        r = std::move(cr);
        rss = c_rss;
      }
    };
    const Scalar sw = w.sum(), sy = losses.sum(), sww = w.squaredNorm(), swy = w.dot(losses);
    const Scalar det = Scalar(n) * sww - sw * sw;
    if (det > 0) consider((Scalar(n) * swy - sw * sy) / det, (sww * sy - sw * swy) / det);
    consider(A_lo, std::clamp((sy - A_lo * sw) / Scalar(n), Scalar(0), floor_hi));
    for (const Scalar L : {Scalar(0), floor_hi}) consider(max(A_lo, (swy - L * sw) / sww), L);
  };

  while (iter < config.max_iterations) {
    ++iter;
    linear_polish();
    if (rss == 0) {
      converged = true;
      break;
    }
    const Scalar A = exp(theta(0));
    Eigen::Matrix<Scalar, Eigen::Dynamic, 3> J(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar w = A * exp(-theta(1) * log_p(i));
      J(i, 0) = w;
      J(i, 1) = -log_p(i) * w;
      J(i, 2) = Scalar(1);
    }
    Mat3 H = J.transpose() * J;
    Vec3 g = J.transpose() * r;
    for (int j = 0; j < 3; ++j) {
      const bool pinned = (theta(j) <= lo(j) && g(j) > 0) || (theta(j) >= hi(j) && g(j) < 0);
      if (!pinned) continue;
      H.row(j).setZero();
      H.col(j).setZero();
      H(j, j) = Scalar(1);
      g(j) = Scalar(0);
    }
    if (g.isZero(Scalar(0))) {
      converged = true;
      break;
    }

    bool accepted = false;
    Vec3 next;
    VectorX<Scalar> next_r;
    Scalar next_rss{};
    while (true) {
      Mat3 damped = H;
      for (int j = 0; j < 3; ++j) {
        damped(j, j) += lambda * max(H(j, j), std::numeric_limits<Scalar>::epsilon());
      }
      const Vec3 step = damped.ldlt().solve(-g);
      next = project(theta + step);
      next_r = residuals(next);
      next_rss = next_r.squaredNorm();
      if (next_rss < rss) {
        accepted = true;
        lambda = max(lambda / config.damping_decrease, Scalar(1e-15));
        break;
      }
      lambda *= config.damping_increase;
      if (lambda > config.max_damping) break;
    }
    if (!accepted) {
      // No descent step exists: stationary to working precision.
      converged = true;
      break;
    }
    const Scalar decrease = rss - next_rss;
    theta = next;
    r = std::move(next_r);
    rss = next_rss;
    small_steps = decrease <= config.rel_tolerance * (rss + decrease) ? small_steps + 1 : 0;
    if (small_steps >= 2) {
      converged = true;
      break;
    }
  }

  ScalingFit<Scalar> fit;
  fit.A = exp(theta(0));
  fit.alpha = theta(1);
  fit.L_inf = theta(2);
  fit.rss = rss;
  fit.n_points = static_cast<std::size_t>(n);
  fit.converged = converged;
  fit.iterations = iter;
  return fit;
}

/// One fit per feasible floor fraction, in grid order.
template <typename Scalar>
std::vector<ScalingFit<Scalar>> multistart_fits(const VectorX<Scalar>& budgets,
                                                const VectorX<Scalar>& losses,
                                                const FitConfig<Scalar>& config = {}) {
  config.validate();
  detail::check_curve(budgets, losses, 4);
  std::vector<ScalingFit<Scalar>> fits;
  for (const Scalar fraction : config.multistart_floor_grid) {
    if (auto start = initialize_params(budgets, losses, fraction, config)) {
      fits.push_back(fit_from_start(budgets, losses, *start, config));
    }
  }
  return fits;
}

/// Least-squares fit of the saturating power law in the original loss domain.
/// Best RSS over the multistart grid wins; ties go to the smaller L_inf.
/// Throws "insufficient points" (< 4), "degenerate abscissae", "infeasible start".
template <typename Scalar>
ScalingFit<Scalar> fit_scaling_law(const VectorX<Scalar>& budgets, const VectorX<Scalar>& losses,
                                   const FitConfig<Scalar>& config = {}) {
  auto fits = multistart_fits(budgets, losses, config);
  if (fits.empty()) throw Error(ErrorKind::InfeasibleStart, "no feasible multistart point");
  return *std::min_element(fits.begin(), fits.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rss, a.L_inf) < std::tie(b.rss, b.L_inf);
  });
}

/// (budgets, losses) columns of a frontier.
inline std::pair<VectorX<double>, VectorX<double>> curve_of(const Frontier& frontier) {
  VectorX<double> budgets(static_cast<Eigen::Index>(frontier.size()));
  VectorX<double> losses(static_cast<Eigen::Index>(frontier.size()));
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    budgets(static_cast<Eigen::Index>(i)) = frontier.points[i].total_params_billions;
    losses(static_cast<Eigen::Index>(i)) = frontier.points[i].loss;
  }
  return {std::move(budgets), std::move(losses)};
}

inline ScalingFit<double> fit_scaling_law(const Frontier& frontier, const FitConfig<double>& config = {}) {
  const auto [budgets, losses] = curve_of(frontier);
  return fit_scaling_law(budgets, losses, config);
}

inline std::optional<InitialGuess<double>> initialize_params(const Frontier& frontier,
                                                             double floor_fraction,
                                                             const FitConfig<double>& config = {}) {
  const auto [budgets, losses] = curve_of(frontier);
  return initialize_params(budgets, losses, floor_fraction, config);
}

using ScalingFitd = ScalingFit<double>;
using FitConfigd = FitConfig<double>;

}  // namespace mmlaw
