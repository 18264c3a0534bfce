#pragma once

#include <optional>
#include <string>

#include "asttf/signal.hpp"

namespace asttf {

// One row of the results table. rmse is absent for methods that do not
// reconstruct a time signal.
struct MetricReport {
  std::string method;
  double renyi_bits = 0.0;
  std::optional<double> rmse;
};

// Order-alpha Renyi entropy of a non-negative distribution, in bits:
//   R = 1/(1 - alpha) * log2( sum (C/sum C)^alpha ).
// alpha defaults to 3 (lower = more concentrated). C must be elementwise
// >= 0 with positive total mass; alpha > 0, alpha != 1.
double renyi_entropy(const Eigen::MatrixXd& c, double alpha = 3.0);

// Root-mean-square error between two equal-length signals.
double rmse(const Signal& estimate, const Signal& truth);

}  // namespace asttf
