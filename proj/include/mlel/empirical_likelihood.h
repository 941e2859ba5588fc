#ifndef MLEL_EMPIRICAL_LIKELIHOOD_H_
#define MLEL_EMPIRICAL_LIKELIHOOD_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mlel/graph_model.h"
#include "mlel/statistics.h"

namespace mlel {

enum class ElStatus {
  kSolved,
  kHullViolation,  // zero is not strictly inside (min x, max x)
  kDegenerate,     // every x_i is zero
};

const char* to_string(ElStatus status);

struct DualSolution {
  double multiplier = 0.0;  // t in sum x_i / (1 + t x_i) = 0
  ElStatus status = ElStatus::kSolved;
  int iterations = 0;
};

// Empirical likelihood ratio for H0: E[X] = 0 of a univariate sample.
struct ElResult {
  double statistic = 0.0;  // -2 log R_n, +inf on hull violation
  double multiplier = 0.0;
  std::vector<double> weights;  // w_i = 1 / (n (1 + t x_i)); empty on hull violation
  ElStatus status = ElStatus::kSolved;
  double p_value = 1.0;
  int df = 1;
};

// Solves the convex dual for the Lagrange multiplier.
//
// The root of g(t) = sum x_i / (1 + t x_i) lies where every implied weight is
// at most one, i.e. in [(1/n - 1) / max x, (1/n - 1) / min x], which is a
// closed subinterval of the open feasibility interval (-1/max x, -1/min x).
// g is strictly decreasing there. Newton steps are taken from inside that
// bracket and replaced by bisection whenever they leave it or fail to shrink
// |g|. Converges when |g| <= 1e-10 * n * max|x|; throws SolverError after
// 200 iterations.
DualSolution solve_dual(std::span<const double> x);

// Statistic, weights and chi-square(1) p-value.
ElResult el_statistic(std::span<const double> x);

struct TestReport {
  ElResult el;
  double alpha = 0.05;
  double critical_value = 0.0;  // chi^2_{1, 1 - alpha}
  bool reject = false;
  std::vector<std::size_t> layer_order;  // 0-based; front() is the reference layer
};

// weighted_degree_difference -> el_statistic -> compare to the chi-square(1)
// critical value. Rejects iff statistic > critical value. alpha in (0, 1].
TestReport el_test(const MultilayerNetwork& net, std::size_t reference_layer = 0,
                   double alpha = 0.05, Centering centering = Centering::kNodeDegree);

// chi^2_{1, 1 - alpha}; -inf at alpha = 1 so that every sample rejects.
double critical_value(double alpha);

}  // namespace mlel

#endif  // MLEL_EMPIRICAL_LIKELIHOOD_H_
