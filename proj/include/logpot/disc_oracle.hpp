#pragma once

#include <cstddef>
#include <vector>

#include "logpot/spectral.hpp"

namespace logpot {

inline constexpr int kMaxBesselOrder = 1000;
inline constexpr double kMaxBesselArgument = 1e4;

/// Bessel function of the first kind J_l(x) for integer order l >= 0 and
/// x >= 0: ascending series for small x, otherwise Miller's backward
/// recurrence normalized by J_0 + 2 sum J_2k = 1.
double bessel_j(int l, double x);

/// J_{l-1}(x) and J_l(x) from one recurrence pass (J_{-1} = -J_1).
struct BesselPair {
  double lower;
  double value;
};
BesselPair bessel_j_pair(int l, double x);

/// Positive zeros j_{l,m} for 0 <= l <= l_max, 1 <= m <= m_max.
///
/// Order 0 is bracketed around McMahon's guess (m - 1/4) pi; order l >= 1 is
/// bracketed by the interlacing j_{l-1,m} < j_{l,m} < j_{l-1,m+1}, which stays
/// valid where McMahon's expansion in m is poor (l large, m small). Each zero
/// is refined by safeguarded Newton to machine precision.
class BesselZeroTable {
 public:
  BesselZeroTable(int l_max, int m_max);

  int l_max() const { return l_max_; }
  int m_max() const { return m_max_; }
  /// m is 1-based.
  double zero(int l, int m) const;

 private:
  int l_max_;
  int m_max_;
  std::vector<std::vector<double>> zeros_;
};

double bessel_zero(int l, int m);

struct DiscCharnum {
  double value;      // j_{l,m}^2
  int multiplicity;  // 3 for l = 0, 2 otherwise
  int l;
  int m;
};

/// Characteristic numbers of the unit-disc operator, ascending.
std::vector<DiscCharnum> disc_charnums(const BesselZeroTable& table);
std::vector<DiscCharnum> disc_charnums(int l_max, int m_max);

/// Unit-disc Schatten p-norm, p > 1, from the Bessel series. Terms with
/// j_{l,m} below min(j_{l_max,1}, j_{0,m_max}) are summed exactly and the rest
/// is estimated from the two-term Weyl law. error_bound is rigorous: the
/// exact sum lies between the full table sum and that sum plus
/// disc_tail_bound, and the bound covers both ends.
SchattenEstimate disc_schatten(const BesselZeroTable& table, double p);
SchattenEstimate disc_schatten(double p, int l_max, int m_max);

/// Weyl-law estimate of sum of mult / j^{2p} over all zeros j >= cut.
double weyl_tail(double p, double cut);

/// Bound on sum of mult / j^{2p} over indices outside the table.
double disc_tail_bound(double p, int l_max, int m_max);

/// 1 / j_{0,1}^2.
double disc_opnorm();

}  // namespace logpot
