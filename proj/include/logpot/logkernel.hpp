#pragma once

#include "logpot/geometry.hpp"

namespace logpot {

/// Radial profile of the logarithmic kernel, (1/2pi) ln(1/r).
double kernel_profile(double r);

/// (1/2pi) ln(1/|x - y|). Throws "kernel singularity" for x == y.
double log_kernel(Point2 x, Point2 y);

/// Splitting of the kernel profile into a positive strictly decreasing part
/// h1 = f - f_inf and a non-increasing remainder h2.
///
/// f agrees with the profile on (0, r0]; beyond r0 it decays like the
/// integral of (1 + r0^2) / (s (1 + s^2)), which has a finite limit f_inf.
class KernelDecomposition {
 public:
  explicit KernelDecomposition(double r0);

  double r0() const { return r0_; }
  double f_inf() const { return f_inf_; }

  double f(double r) const;
  double h1(double r) const;
  double h2(double r) const;
  /// h2(r) - h2(R) for r <= R, zero beyond the cut.
  double q(double r, double cut) const;

 private:
  double r0_;
  double f_inf_;
};

double f_split(double r, double r0);
double f_inf(double r0);
double h1(double r, double r0);
double h2(double r, double r0);
double q_R(double r, double r0, double cut);

}  // namespace logpot
