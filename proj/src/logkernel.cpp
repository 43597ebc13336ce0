#include "logpot/logkernel.hpp"

#include <cmath>

namespace logpot {

namespace {

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("radius must be positive");
}

}  // namespace

double kernel_profile(double r) {
  require_radius(r);
  return -std::log(r) / kTwoPi;
}

double log_kernel(Point2 x, Point2 y) {
  if (x == y) throw Error("kernel singularity");
  return -std::log(distance(x, y)) / kTwoPi;
}

// For r > r0 the closed form is
//   ln(1/r0)/2pi - (1+r0^2)/2pi [ln r - ln(1+r^2)/2 - ln r0 + ln(1+r0^2)/2],
// and ln r - ln(1+r^2)/2 = -log1p(r^-2)/2, which stays accurate for large r.

KernelDecomposition::KernelDecomposition(double r0) : r0_(r0) {
  require_radius(r0);
  f_inf_ = (-std::log(r0) - 0.5 * (1.0 + r0 * r0) * std::log1p(1.0 / (r0 * r0))) / kTwoPi;
}

double KernelDecomposition::f(double r) const {
  require_radius(r);
  if (r <= r0_) return -std::log(r) / kTwoPi;
  const double bracket = 0.5 * (std::log1p(1.0 / (r0_ * r0_)) - std::log1p(1.0 / (r * r)));
  return (-std::log(r0_) - (1.0 + r0_ * r0_) * bracket) / kTwoPi;
}

double KernelDecomposition::h1(double r) const {
  require_radius(r);
  if (r <= r0_) return -std::log(r) / kTwoPi - f_inf_;
  // f - f_inf collapses to a single positive term
  return (1.0 + r0_ * r0_) * 0.5 * std::log1p(1.0 / (r * r)) / kTwoPi;
}

double KernelDecomposition::h2(double r) const {
  require_radius(r);
  if (r <= r0_) return f_inf_;
  const double bracket = 0.5 * (std::log1p(1.0 / (r0_ * r0_)) - std::log1p(1.0 / (r * r)));
  return (std::log(r0_) - std::log(r) + (1.0 + r0_ * r0_) * bracket) / kTwoPi + f_inf_;
}

double KernelDecomposition::q(double r, double cut) const {
  require_radius(r);
  require_radius(cut);
  if (r >= cut) return 0.0;
  return h2(r) - h2(cut);
}

double f_split(double r, double r0) { return KernelDecomposition(r0).f(r); }
double f_inf(double r0) { return KernelDecomposition(r0).f_inf(); }
double h1(double r, double r0) { return KernelDecomposition(r0).h1(r); }
double h2(double r, double r0) { return KernelDecomposition(r0).h2(r); }
double q_R(double r, double r0, double cut) { return KernelDecomposition(r0).q(r, cut); }

}  // namespace logpot
