#include "gpm/hermite.hpp"

#include <cmath>
#include <functional>

#include "gpm/errors.hpp"

namespace gpm {

void hermite_normalized(double x, int max_degree, double* out) {
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = x;
  for (int n = 1; n < max_degree; ++n) {
    out[n + 1] = (x * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                 std::sqrt(static_cast<double>(n + 1));
  }
}

double hermite_he(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::size_t HermiteBasis::count(int dim, int degree) {
  // C(dim + degree, degree)
  double c = 1.0;
  for (int i = 1; i <= degree; ++i) c = c * (dim + i) / i;
  return static_cast<std::size_t>(std::llround(c));
}

HermiteBasis::HermiteBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  require(dim >= 1, "HermiteBasis: dimension must be positive");
  require(degree >= 0, "HermiteBasis: degree must be nonnegative");
  offsets_.push_back(0);
  std::vector<Factor> current;
  // Graded enumeration: total degree t, then lexicographic over variables.
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (remaining == 0) {
      factors_.insert(factors_.end(), current.begin(), current.end());
      offsets_.push_back(factors_.size());
      return;
    }
    if (var == dim_) return;
    for (int p = remaining; p >= 0; --p) {
      if (p > 0) current.push_back({var, p});
      rec(var + 1, remaining - p);
      if (p > 0) current.pop_back();
    }
  };
  for (int t = 0; t <= degree_; ++t) rec(0, t);
}

std::vector<int> HermiteBasis::multi_index(std::size_t term) const {
  std::vector<int> alpha(static_cast<std::size_t>(dim_), 0);
  for (const Factor& f : support(term)) alpha[static_cast<std::size_t>(f.var)] = f.power;
  return alpha;
}

std::size_t HermiteBasis::index_of(std::span<const int> alpha) const {
  require_dim(alpha.size(), static_cast<std::size_t>(dim_), "HermiteBasis::index_of");
  for (std::size_t t = 0; t < size(); ++t) {
    const auto sup = support(t);
    int nnz = 0;
    for (int a : alpha) nnz += a != 0;
    if (static_cast<int>(sup.size()) != nnz) continue;
    bool same = true;
    for (const Factor& f : sup) same = same && alpha[static_cast<std::size_t>(f.var)] == f.power;
    if (same) return t;
  }
  throw ContractError("HermiteBasis::index_of: multi-index outside the basis");
}

}  // namespace gpm
