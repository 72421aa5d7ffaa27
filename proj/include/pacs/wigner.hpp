#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pacs/fock.hpp"

namespace pacs {

struct PhaseSpacePoint {
  double x;
  double p;
};

struct PhaseSpaceGrid {
  double x_min, x_max, p_min, p_max;
  int n_x, n_p;

  PhaseSpaceGrid(double xmin, double xmax, double pmin, double pmax, int nx, int np)
      : x_min(xmin), x_max(xmax), p_min(pmin), p_max(pmax), n_x(nx), n_p(np) {
    if (!(xmin < xmax && pmin < pmax) || nx < 2 || np < 2) {
      throw std::domain_error("PhaseSpaceGrid: bounds must be ordered and counts >= 2");
    }
  }

  double x(int i) const { return x_min + (x_max - x_min) * i / (n_x - 1); }
  double p(int j) const { return p_min + (p_max - p_min) * j / (n_p - 1); }
  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }

  static PhaseSpaceGrid standard() { return PhaseSpaceGrid(-6.0, 6.0, -6.0, 6.0, 201, 201); }
};

// Displaced-parity Wigner evaluation:
//   W(x, p) = (1/pi) sum_n (-1)^n |<n| D(beta)^dag |psi>|^2,  beta = (x + i p)/sqrt(2)
// in the convention of a vacuum Wigner function (1/pi) e^{-x^2 - p^2}
// (coherent |alpha> centered at x = sqrt(2) Re alpha), so the integral over
// dx dp is 1.
//
// D(beta)^dag = R(theta) exp(i |beta| H) R(-theta) with H = i(a^dag - a)
// Hermitian and R a number-operator phase rotation; H is diagonalized once
// per evaluator, so each point costs two dense matrix-vector products.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(int cutoff) : cutoff_(cutoff) {
    const int dim = cutoff + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
      const double s = std::sqrt(static_cast<double>(n + 1));
      h(n + 1, n) = Complex(0.0, s);
      h(n, n + 1) = Complex(0.0, -s);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    eigvecs_ = solver.eigenvectors();
    eigvals_ = solver.eigenvalues();
  }

  int cutoff() const { return cutoff_; }

  // Cutoff large enough to hold `state_cutoff` photons displaced by
  // |beta| <= beta_max.
  static int required_cutoff(int state_cutoff, double beta_max) {
    const double reach = std::sqrt(static_cast<double>(state_cutoff)) + beta_max;
    return static_cast<int>(std::ceil(reach * reach + 9.0 * reach + 16.0));
  }

  double evaluate(const PureState& state, PhaseSpacePoint pt) const {
    const Complex beta(pt.x / std::sqrt(2.0), pt.p / std::sqrt(2.0));
    const double mag = std::abs(beta);
    const double theta = std::arg(beta);
    const int dim = cutoff_ + 1;

    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n <= state.cutoff() && n < dim; ++n) {
      u(n) = state.amplitude(n) * std::polar(1.0, -n * theta);
    }
    Eigen::VectorXcd w = eigvecs_.adjoint() * u;
    for (int k = 0; k < dim; ++k) w(k) *= std::polar(1.0, mag * eigvals_(k));
    const Eigen::VectorXcd displaced = eigvecs_ * w;

    double parity = 0.0;
    for (int n = 0; n < dim; ++n) {
      const double prob = std::norm(displaced(n));
      parity += (n % 2 == 0) ? prob : -prob;
    }
    return parity / M_PI;
  }

 private:
  int cutoff_;
  Eigen::MatrixXcd eigvecs_;
  Eigen::VectorXd eigvals_;
};

inline double wigner_point(const PureState& state, PhaseSpacePoint pt) {
  const double beta = std::hypot(pt.x, pt.p) / std::sqrt(2.0);
  WignerEvaluator eval(WignerEvaluator::required_cutoff(state.cutoff(), beta));
  return eval.evaluate(state, pt);
}

// Row-major samples W[i_x * n_p + i_p] over the grid. Points are
// independent; worker count is capped by PACS_THREADS.
inline std::vector<double> wigner_grid(const PureState& state, const PhaseSpaceGrid& grid) {
  const double corner = std::max({std::abs(grid.x_min), std::abs(grid.x_max)});
  const double corner_p = std::max({std::abs(grid.p_min), std::abs(grid.p_max)});
  const double beta_max = std::hypot(corner, corner_p) / std::sqrt(2.0);
  const WignerEvaluator eval(WignerEvaluator::required_cutoff(state.cutoff(), beta_max));

  std::vector<double> values(static_cast<std::size_t>(grid.n_x) * grid.n_p);
  unsigned workers = std::thread::hardware_concurrency();
  if (const char* cap = std::getenv("PACS_THREADS")) {
    const long requested = std::strtol(cap, nullptr, 10);
    if (requested >= 1) workers = std::min<unsigned>(workers, static_cast<unsigned>(requested));
  }
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.n_x)));

  auto run_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int j = 0; j < grid.n_p; ++j) {
        values[static_cast<std::size_t>(i) * grid.n_p + j] =
            eval.evaluate(state, {grid.x(i), grid.p(j)});
      }
    }
  };
  if (workers == 1) {
    run_rows(0, grid.n_x);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (grid.n_x + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(grid.n_x, begin + chunk);
      if (begin < end) pool.emplace_back(run_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return values;
}

// Analytic two-mode input Wigner function: coherent (mode 1) x vacuum
// (mode 2),
//   (1/pi^2) exp[-(x1 - sqrt(2)|a|cos th)^2 - (p1 - sqrt(2)|a|sin th)^2 - x2^2 - p2^2]
inline double input_wigner_analytic(double x1, double p1, double x2, double p2,
                                    double alpha_mag, double theta) {
  const double cx = std::sqrt(2.0) * alpha_mag * std::cos(theta);
  const double cp = std::sqrt(2.0) * alpha_mag * std::sin(theta);
  const double ex = (x1 - cx) * (x1 - cx) + (p1 - cp) * (p1 - cp) + x2 * x2 + p2 * p2;
  return std::exp(-ex) / (M_PI * M_PI);
}

// Trapezoid integral of row-major grid samples.
inline double integrate_grid(const std::vector<double>& values, const PhaseSpaceGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    const double wx = (i == 0 || i == grid.n_x - 1) ? 0.5 : 1.0;
    for (int j = 0; j < grid.n_p; ++j) {
      const double wp = (j == 0 || j == grid.n_p - 1) ? 0.5 : 1.0;
      acc += wx * wp * values[static_cast<std::size_t>(i) * grid.n_p + j];
    }
  }
  return acc * grid.dx() * grid.dp();
}

// Heralding probability as a phase-space integral: the projected mode's
// marginal Wigner function against the vacuum kernel 2 e^{-x^2 - p^2}.
inline double vacuum_overlap_probability(
    const std::function<double(double, double)>& marginal_wigner, const PhaseSpaceGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    const double wx = (i == 0 || i == grid.n_x - 1) ? 0.5 : 1.0;
    const double x = grid.x(i);
    for (int j = 0; j < grid.n_p; ++j) {
      const double wp = (j == 0 || j == grid.n_p - 1) ? 0.5 : 1.0;
      const double p = grid.p(j);
      acc += wx * wp * marginal_wigner(x, p) * 2.0 * std::exp(-x * x - p * p);
    }
  }
  return acc * grid.dx() * grid.dp();
}

// Decompose a joint state into a classical ensemble over mode 1 counts;
// the weighted members represent the reduced density matrix of mode 2.
inline std::vector<std::pair<double, PureState>> mode2_marginal_ensemble(
    const TwoModeState& joint) {
  std::vector<std::pair<double, PureState>> out;
  for (int n1 = 0; n1 <= joint.cutoff(); ++n1) {
    PureState row(joint.cutoff());
    for (int n2 = 0; n2 <= joint.cutoff(); ++n2) row.amplitude(n2) = joint.amplitude(n1, n2);
    const double weight = row.norm_squared();
    if (weight > 1e-18) out.emplace_back(weight, row.normalized());
  }
  return out;
}

}  // namespace pacs
