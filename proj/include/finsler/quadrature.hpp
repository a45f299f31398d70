#pragma once

#include <functional>
#include <vector>

namespace finsler {

/// Fixed-order Gauss-Legendre rule on [-1, 1], mapped to [a, b] on use.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  double integrate(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared 32-node rule used for user-supplied Lemma-C profiles.
const GaussLegendre& gauss_legendre_32();

}  // namespace finsler
