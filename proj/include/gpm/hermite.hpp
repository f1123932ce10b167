#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gpm {

/// Orthonormal probabilists' Hermite polynomials h_n = He_n / sqrt(n!),
/// for n = 0..max_degree, written to out[0..max_degree].
void hermite_normalized(double x, int max_degree, double* out);

/// Unnormalized He_n(x) by the three-term recurrence.
double hermite_he(int n, double x);

/// Tensor basis h_alpha(z) = prod_j h_{alpha_j}(z_j) over all multi-indices
/// with |alpha| <= degree, in graded order (constant term first). Each
/// multi-index is stored sparsely as its nonzero (variable, power) pairs.
class HermiteBasis {
 public:
  struct Factor {
    int var;
    int power;
  };

  HermiteBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return offsets_.size() - 1; }

  std::span<const Factor> support(std::size_t term) const {
    return {factors_.data() + offsets_[term], offsets_[term + 1] - offsets_[term]};
  }
  std::vector<int> multi_index(std::size_t term) const;
  /// Throws ContractError if alpha is not in the basis.
  std::size_t index_of(std::span<const int> alpha) const;

  static std::size_t count(int dim, int degree);

 private:
  int dim_;
  int degree_;
  std::vector<Factor> factors_;
  std::vector<std::size_t> offsets_;
};

}  // namespace gpm
