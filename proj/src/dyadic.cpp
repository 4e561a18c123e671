#include "sspt/dyadic.hpp"

#include <cmath>
#include <string>

namespace sspt {

std::pair<double, double> interval_of(NodeIndex node) {
  const double w = std::ldexp(1.0, -node.level);
  return {double(node.position) * w, double(node.position + 1) * w};
}

int truncation_level(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("truncation_level: n must be >= 1");
  int lmax = 0;
  while ((std::int64_t{1} << (lmax + 1)) <= n) ++lmax;  // lmax = floor(log2 n)
  int best = 0;
  for (int L = 1; L <= lmax; ++L) {
    // 2^L L^2 <= n  <=>  L^2 <= n >> L  (both sides integral)
    if (std::int64_t(L) * L <= (n >> L)) best = L;
  }
  return best;
}

CountTree count_data(std::span<const double> data, int depth) {
  if (depth < 0) throw std::invalid_argument("count_data: negative depth");
  CountTree tree(depth);
  const double scale = std::ldexp(1.0, depth);  // 2^depth, exact
  auto leaves = tree.counts.level(depth);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double x = data[i];
    if (!(x > 0.0) || !(x <= 1.0))
      throw std::invalid_argument("count_data: point " + std::to_string(i) +
                                  " outside (0,1]");
    // x in (k 2^-L, (k+1) 2^-L]  <=>  k = ceil(x 2^L) - 1; the product is
    // exact because 2^L only shifts the exponent.
    const auto k = std::int64_t(std::ceil(x * scale)) - 1;
    ++leaves[std::size_t(k)];
  }
  for (int l = depth - 1; l >= 0; --l) {
    auto up = tree.counts.level(l);
    auto down = tree.counts.level(l + 1);
    for (std::size_t k = 0; k < up.size(); ++k)
      up[k] = down[2 * k] + down[2 * k + 1];
  }
  tree.total = std::int64_t(data.size());
  return tree;
}

}  // namespace sspt
