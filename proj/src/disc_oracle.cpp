#include "logpot/disc_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace logpot {

namespace {

void check_bessel_args(int l, double x) {
  if (l < 0 || l > kMaxBesselOrder) throw Error("Bessel order out of range");
  if (!(x >= 0.0) || x > kMaxBesselArgument) throw Error("Bessel argument out of range");
}

// J_l(x) by the ascending series; used where it converges without cancellation.
double series(int l, double x) {
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  const double lead = std::exp(l * std::log(0.5 * x) - std::lgamma(l + 1.0));
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(l + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

bool use_series(int l, double x) { return x <= 2.0 || 0.25 * x * x < 0.05 * (l + 1); }

// Miller's algorithm; returns J_{l-1} and J_l (l >= 1) or J_0 and J_1 (l = 0).
BesselPair miller(int l, double x) {
  const int want = std::max(l, 1);
  const double big = std::max<double>(want, x);
  int start = static_cast<int>(std::ceil(big + 20.0 * std::cbrt(big) + 40.0));
  start += start % 2;
  double next = 0.0, cur = 1e-300, norm = 0.0;
  double at_want = 0.0, at_below = 0.0;
  for (int k = start; k >= 1; --k) {
    // cur = J_k (unnormalized), next = J_{k+1}
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx == want) at_want = cur;
    if (idx == want - 1) at_below = cur;
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      at_want *= 1e-250;
      at_below *= 1e-250;
    }
  }
  norm += cur;  // J_0
  return {at_below / norm, at_want / norm};
}

}  // namespace

BesselPair bessel_j_pair(int l, double x) {
  check_bessel_args(l, x);
  if (l == 0) {
    if (use_series(1, x)) return {-series(1, x), series(0, x)};
    const auto p = miller(0, x);
    return {-p.value, p.lower};
  }
  if (use_series(l - 1, x)) return {series(l - 1, x), series(l, x)};
  return miller(l, x);
}

double bessel_j(int l, double x) { return bessel_j_pair(l, x).value; }

// ---------------------------------------------------------------------------
// Zeros

namespace {

double derivative(int l, double x, const BesselPair& p) {
  // J_l' = J_{l-1} - (l/x) J_l; for l = 0 the pair holds -J_1 as "lower".
  return l == 0 ? p.lower : p.lower - l / x * p.value;
}

double refine_zero(int l, double lo, double hi) {
  double flo = bessel_j(l, lo);
  double fhi = bessel_j(l, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw Error("Bessel zero bracket failure");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto p = bessel_j_pair(l, x);
    if (p.value == 0.0) return x;
    if ((p.value > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = p.value;
    } else {
      hi = x;
    }
    const double d = derivative(l, x, p);
    double nx = d != 0.0 ? x - p.value / d : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    const double step = std::abs(nx - x);
    x = nx;
    if (step <= 4e-16 * x || hi - lo <= 4e-16 * x) break;
  }
  return x;
}

double order0_zero(int m) {
  const double beta = (m - 0.25) * kPi;
  // j_{0,m} - beta is about 1/(8 beta), in (0, 0.06]
  return refine_zero(0, beta - 0.1, beta + 0.3);
}

}  // namespace

BesselZeroTable::BesselZeroTable(int l_max, int m_max) : l_max_(l_max), m_max_(m_max) {
  if (l_max < 0 || m_max < 1) throw Error("Bessel zero table bounds must satisfy l >= 0, m >= 1");
  if (l_max > kMaxBesselOrder) throw Error("Bessel order out of range");
  zeros_.resize(static_cast<std::size_t>(l_max) + 1);
  // order l keeps m_max + l_max - l zeros so order l + 1 can be bracketed
  for (int l = 0; l <= l_max; ++l) {
    const std::size_t count = static_cast<std::size_t>(m_max + l_max - l);
    auto& row = zeros_[static_cast<std::size_t>(l)];
    row.resize(count);
    if (l == 0) {
      parallel_for(count, [&row](std::size_t k) { row[k] = order0_zero(static_cast<int>(k) + 1); });
    } else {
      const auto& prev = zeros_[static_cast<std::size_t>(l - 1)];
      parallel_for(count, [&row, &prev, l](std::size_t k) { row[k] = refine_zero(l, prev[k], prev[k + 1]); });
    }
  }
}

double BesselZeroTable::zero(int l, int m) const {
  if (l < 0 || l > l_max_ || m < 1 || m > m_max_) throw Error("Bessel zero index outside table");
  return zeros_[static_cast<std::size_t>(l)][static_cast<std::size_t>(m - 1)];
}

double bessel_zero(int l, int m) { return BesselZeroTable(l, m).zero(l, m); }

// ---------------------------------------------------------------------------
// Disc spectrum

std::vector<DiscCharnum> disc_charnums(const BesselZeroTable& table) {
  std::vector<DiscCharnum> out;
  out.reserve(static_cast<std::size_t>((table.l_max() + 1) * table.m_max()));
  for (int l = 0; l <= table.l_max(); ++l) {
    for (int m = 1; m <= table.m_max(); ++m) {
      const double j = table.zero(l, m);
      out.push_back({j * j, l == 0 ? 3 : 2, l, m});
    }
  }
  std::sort(out.begin(), out.end(), [](const DiscCharnum& a, const DiscCharnum& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.l < b.l;
  });
  return out;
}

std::vector<DiscCharnum> disc_charnums(int l_max, int m_max) {
  return disc_charnums(BesselZeroTable(l_max, m_max));
}

double weyl_tail(double p, double cut) {
  if (!(p > 1.0)) throw Error("disc Schatten series requires p > 1");
  // Dirichlet eigenvalues j^2 of the unit disc (mult 1 for l = 0) counted by
  // N(t) ~ t / 4 - sqrt(t) / 2, plus the extra copy of each j_{0,m}, whose
  // spacing tends to pi.
  const double t = cut * cut;
  return 0.25 * std::pow(t, 1.0 - p) / (p - 1.0) - 0.25 * std::pow(t, 0.5 - p) / (p - 0.5) +
         2.0 * std::pow(cut, 1.0 - 2.0 * p) / (kPi * (2.0 * p - 1.0));
}

double disc_tail_bound(double p, int l_max, int m_max) {
  if (!(p > 1.0)) throw Error("disc Schatten series requires p > 1");
  // Uses j_{l,m} >= sqrt(l^2 + ((m - 1/4) pi)^2) and integral comparison for
  // the decreasing summands. c_p = int_0^inf (l^2 + 1)^-p dl.
  const double c_p = std::sqrt(kPi) * std::exp(std::lgamma(p - 0.5) - std::lgamma(p)) / 2.0;
  const double a = (m_max - 0.25) * kPi;
  const auto tail_m = [a](double q) { return std::pow(a, 1.0 - q) / (kPi * (q - 1.0)); };
  const double beyond_m = 3.0 * tail_m(2.0 * p) + 2.0 * c_p * tail_m(2.0 * p - 1.0);
  double beyond_l = 0.0;
  if (l_max >= 1) {
    const double big_l = l_max;
    beyond_l = 2.0 * (std::pow(big_l, 1.0 - 2.0 * p) / (2.0 * p - 1.0) +
                      c_p / kPi * std::pow(big_l, 2.0 - 2.0 * p) / (2.0 * p - 2.0));
  } else {
    beyond_l = kInfinity;
  }
  return beyond_m + beyond_l;
}

SchattenEstimate disc_schatten(const BesselZeroTable& table, double p) {
  if (!(p > 1.0)) throw Error("disc Schatten series requires p > 1");
  SchattenEstimate est;
  est.p = p;
  est.method = SchattenMethod::DiscOracle;
  // Every zero below cut is in the table: j_{l,1} grows with l and
  // j_{l,m} > j_{0,m}.
  const double cut = std::min(table.zero(table.l_max(), 1), table.zero(0, table.m_max()));
  std::vector<double> inside, outside;
  for (int l = 0; l <= table.l_max(); ++l) {
    for (int m = 1; m <= table.m_max(); ++m) {
      const double z = table.zero(l, m);
      (z < cut ? inside : outside).push_back((l == 0 ? 3.0 : 2.0) * std::pow(z, -2.0 * p));
    }
  }
  const auto total = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double t : v) sum += t;
    return sum;
  };
  const double below = total(inside);
  const double rectangle = below + total(outside);
  est.value = std::pow(below + weyl_tail(p, cut), 1.0 / p);
  // the true sum lies in [rectangle, rectangle + tail bound]
  const double tail = disc_tail_bound(p, table.l_max(), table.m_max());
  est.error_bound = std::max(std::abs(std::pow(rectangle, 1.0 / p) - est.value),
                             std::abs(std::pow(rectangle + tail, 1.0 / p) - est.value));
  return est;
}

SchattenEstimate disc_schatten(double p, int l_max, int m_max) {
  if (!(p > 1.0)) throw Error("disc Schatten series requires p > 1");
  return disc_schatten(BesselZeroTable(l_max, m_max), p);
}

double disc_opnorm() {
  const double j = bessel_zero(0, 1);
  return 1.0 / (j * j);
}

}  // namespace logpot
