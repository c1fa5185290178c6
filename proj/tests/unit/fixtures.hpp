#pragma once

#include "lqrl/lq_model.hpp"

namespace fixtures {

inline lqrl::Mat m1(double v) { return lqrl::Mat::Constant(1, 1, v); }

inline lqrl::LqProblem scalar(double f, double g, double q, double r, double qf, double p) {
  return lqrl::LqProblem{m1(f), m1(g), lqrl::SymMat(m1(q)), lqrl::SymMat(m1(r)),
                         lqrl::SymMat(m1(qf)), p};
}

// x' = 0.9 x + u, unit costs, stop probability 0.1.
inline lqrl::LqProblem reference() { return scalar(0.9, 1.0, 1.0, 1.0, 1.0, 0.1); }

inline lqrl::LqgProblem lift(const lqrl::LqProblem& base, double xi, double zeta) {
  const auto n = base.n();
  return lqrl::LqgProblem{base,
                          lqrl::Mat::Identity(n, n),
                          lqrl::SymMat::identity(n, xi),
                          lqrl::SymMat::identity(n, zeta),
                          lqrl::Vec::Zero(n),
                          lqrl::SymMat::zero(n)};
}

// Scalar stopped Riccati map, written out by hand.
inline double scalar_map(double f, double g, double q, double r, double qf, double p, double pi) {
  return p * qf + (1 - p) * (q + f * f * pi - f * f * g * g * pi * pi / (r + g * g * pi));
}

// Fixed point of scalar_map by bisection on [0, hi].
inline double scalar_pi_star(double f, double g, double q, double r, double qf, double p) {
  double lo = 0.0, hi = 1.0;
  while (scalar_map(f, g, q, r, qf, p, hi) > hi) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (scalar_map(f, g, q, r, qf, p, mid) > mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fixtures
