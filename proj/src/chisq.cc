#include "mlel/chisq.h"

#include <cmath>
#include <limits>

#include "mlel/error.h"

namespace mlel {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized gamma P(a, x) by its power series; good for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction;
// good for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_dof(int q) {
  if (q < 1) throw ValidationError("chi-square degrees of freedom must be >= 1");
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("gamma_q needs a > 0");
  if (!(x >= 0.0)) throw ValidationError("gamma_q needs x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chisq_sf(double x, int q) {
  check_dof(q);
  if (std::isnan(x)) throw ValidationError("chisq_sf of NaN");
  if (x <= 0.0) return 1.0;
  if (q == 1) return std::erfc(std::sqrt(0.5 * x));
  return gamma_q(0.5 * q, 0.5 * x);
}

double chisq_cdf(double x, int q) { return 1.0 - chisq_sf(x, q); }

double chisq_pdf(double x, int q) {
  check_dof(q);
  if (x < 0.0) return 0.0;
  const double k = 0.5 * q;
  if (x == 0.0) {
    if (q == 1) return std::numeric_limits<double>::infinity();
    return q == 2 ? 0.5 : 0.0;
  }
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

double chisq_quantile(double p, int q) {
  check_dof(q);
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("chisq_quantile needs p in (0, 1)");
  const double target = 1.0 - p;  // survival probability at the answer

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(q));
  while (chisq_sf(hi, q) > target) {
    lo = hi;
    hi *= 2.0;
  }
  // sf is decreasing: sf(lo) > target >= sf(hi).
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chisq_sf(mid, q) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace mlel
