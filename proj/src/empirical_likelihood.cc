#include "mlel/empirical_likelihood.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlel/chisq.h"
#include "mlel/error.h"

namespace mlel {

namespace {

constexpr int kMaxIterations = 200;

struct DualValue {
  double g = 0.0;      // sum x_i / (1 + t x_i)
  double slope = 0.0;  // g'(t) = -sum x_i^2 / (1 + t x_i)^2
};

DualValue evaluate(std::span<const double> x, double t) {
  DualValue v;
  for (double xi : x) {
    const double r = xi / (1.0 + t * xi);
    v.g += r;
    v.slope -= r * r;
  }
  return v;
}

}  // namespace

const char* to_string(ElStatus status) {
  switch (status) {
    case ElStatus::kSolved:
      return "solved";
    case ElStatus::kHullViolation:
      return "hull_violation";
    case ElStatus::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

DualSolution solve_dual(std::span<const double> x) {
  if (x.empty()) throw ValidationError("empirical likelihood needs at least one value");
  for (double xi : x) {
    if (!std::isfinite(xi)) throw ValidationError("empirical likelihood input is not finite");
  }
  const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
  const double xmin = *min_it;
  const double xmax = *max_it;
  if (xmin == 0.0 && xmax == 0.0) return {0.0, ElStatus::kDegenerate, 0};
  if (!(xmin < 0.0 && xmax > 0.0)) return {0.0, ElStatus::kHullViolation, 0};

  const double n = static_cast<double>(x.size());
  const double scale = std::max(-xmin, xmax);
  const double tolerance = 1e-10 * n * scale;

  // Every weight <= 1 means 1 + t x_i >= 1/n.
  double lo = (1.0 / n - 1.0) / xmax;
  double hi = (1.0 / n - 1.0) / xmin;

  double t = 0.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const DualValue v = evaluate(x, t);
    if (std::abs(v.g) <= tolerance) return {t, ElStatus::kSolved, it};
    if (v.g > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    double next = t - v.g / v.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) return {t, ElStatus::kSolved, it};
    t = next;
  }
  throw SolverError("empirical likelihood dual did not converge in 200 iterations");
}

ElResult el_statistic(std::span<const double> x) {
  const DualSolution dual = solve_dual(x);
  ElResult out;
  out.multiplier = dual.multiplier;
  out.status = dual.status;
  out.df = 1;

  const double n = static_cast<double>(x.size());
  switch (dual.status) {
    case ElStatus::kHullViolation:
      out.statistic = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
      return out;
    case ElStatus::kDegenerate:
      out.statistic = 0.0;
      out.weights.assign(x.size(), 1.0 / n);
      out.p_value = 1.0;
      return out;
    case ElStatus::kSolved:
      break;
  }

  const double t = dual.multiplier;
  out.weights.resize(x.size());
  double log_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_sum += std::log1p(t * x[i]);
    out.weights[i] = 1.0 / (n * (1.0 + t * x[i]));
  }
  out.statistic = std::max(0.0, 2.0 * log_sum);
  out.p_value = chisq_sf(out.statistic, out.df);
  return out;
}

double critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (alpha == 1.0) return -std::numeric_limits<double>::infinity();
  return chisq_quantile(1.0 - alpha, 1);
}

TestReport el_test(const MultilayerNetwork& net, std::size_t reference_layer, double alpha,
                   Centering centering) {
  TestReport report;
  report.alpha = alpha;
  report.critical_value = critical_value(alpha);
  const DifferenceData data = weighted_degree_difference(net, reference_layer, centering);
  report.el = el_statistic(data.values);
  report.reject = report.el.statistic > report.critical_value;

  report.layer_order.push_back(reference_layer);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    if (l != reference_layer) report.layer_order.push_back(l);
  }
  return report;
}

}  // namespace mlel
