// Small numerical helpers: deterministic summation and Gauss-Legendre rules.
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace synflow {

/// Neumaier-compensated sum. Order is fixed by the input order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed-order pairwise sum; result is independent of thread count.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a = -1.0,
                                                                   double b = 1.0);

}  // namespace synflow
