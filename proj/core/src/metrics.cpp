#include "asttf/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace asttf {

double renyi_entropy(const Eigen::MatrixXd& c, double alpha) {
  if (c.size() == 0) throw std::invalid_argument("renyi_entropy: empty distribution");
  if (!(alpha > 0.0) || alpha == 1.0)
    throw std::invalid_argument("renyi_entropy: alpha must be positive and != 1");
  if ((c.array() < 0.0).any())
    throw std::invalid_argument("renyi_entropy: negative entries");
  const double total = c.sum();
  if (!(total > 0.0))
    throw std::domain_error("renyi_entropy: all-zero distribution has no entropy");
  const double s = (c.array() / total).pow(alpha).sum();
  return std::log2(s) / (1.0 - alpha);
}

double rmse(const Signal& estimate, const Signal& truth) {
  if (estimate.samples.size() != truth.samples.size())
    throw std::invalid_argument("rmse: length mismatch");
  if (estimate.samples.size() == 0)
    throw std::invalid_argument("rmse: empty signals");
  return std::sqrt((estimate.samples - truth.samples).squaredNorm() /
                   static_cast<double>(estimate.samples.size()));
}

}  // namespace asttf
