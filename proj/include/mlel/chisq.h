#ifndef MLEL_CHISQ_H_
#define MLEL_CHISQ_H_

namespace mlel {

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

// P(chi^2_q > x). q = 1 goes through erfc(sqrt(x / 2)).
double chisq_sf(double x, int q);

double chisq_cdf(double x, int q);
double chisq_pdf(double x, int q);

// x with chisq_cdf(x, q) = p, for p in (0, 1); bracketed bisection on chisq_sf.
double chisq_quantile(double p, int q);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace mlel

#endif  // MLEL_CHISQ_H_
