#include "sspt/prior.hpp"

#include <cmath>
#include <stdexcept>

#include "sspt/dyadic.hpp"

namespace sspt {

PriorSpec PriorSpec::for_sample_size(std::int64_t n) {
  PriorSpec spec;
  spec.depth = truncation_level(n);
  spec.flat_depth = default_flat_depth(n);
  return spec;
}

void PriorSpec::validate() const {
  if (a < 1) throw std::invalid_argument("PriorSpec: a must be a positive integer");
  if (!(kappa >= 0.0)) throw std::invalid_argument("PriorSpec: kappa must be >= 0");
  if (depth < 0) throw std::invalid_argument("PriorSpec: negative depth");
  if (flat_depth < 0 || flat_depth > depth)
    throw std::invalid_argument("PriorSpec: flat_depth must lie in [0, depth]");
}

double PriorSpec::slab_weight(int parent_depth) const {
  if (flat_depth >= 1 && parent_depth <= flat_depth) return 1.0;
  const int l = parent_depth + 1;  // depth of the split variable eps0
  switch (schedule) {
    case SlabSchedule::kExponential:
      return std::exp(-kappa * l);
    case SlabSchedule::kExponentialNormalized: {
      double norm = 0.0;
      for (int j = 0; j <= depth; ++j) norm += std::exp(-kappa * j);
      return std::exp(-kappa * l) / norm;
    }
    case SlabSchedule::kLLogL:
      return std::exp(-kappa * l * std::log(double(l)));
  }
  throw std::logic_error("PriorSpec: unknown schedule");
}

int default_flat_depth(std::int64_t n) {
  const int L = truncation_level(n);
  int l0 = 1;
  if (n >= 3) {
    const double ln_n = std::log(double(n));
    l0 = int(std::lround(ln_n / std::log(ln_n)));
  }
  if (l0 < 1) l0 = 1;
  if (l0 > L) l0 = L;
  return l0;
}

double kappa_theory(double m0, double m1) {
  if (!(m0 > 0.0) || !(m1 >= m0))
    throw std::invalid_argument("kappa_theory: need 0 < m0 <= m1");
  return 576.0 * m1 / m0 + 5.0 * std::log(2.0);
}

}  // namespace sspt
