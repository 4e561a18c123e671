#include "sspt/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "sspt/rng.hpp"
#include "sspt/special.hpp"

namespace sspt {

double log_bayes_factor(std::int64_t n0, std::int64_t n1, int a) {
  if (n0 < 0 || n1 < 0)
    throw std::invalid_argument("log_bayes_factor: negative counts");
  if (a < 1) throw std::invalid_argument("log_bayes_factor: a must be >= 1");
  return double(n0 + n1) * std::log(2.0) +
         log_beta(double(n0 + a), double(n1 + a)) -
         log_beta(double(a), double(a));
}

double posterior_slab_weight(double pi, double log_T) {
  if (!(pi >= 0.0) || !(pi <= 1.0))
    throw std::invalid_argument("posterior_slab_weight: pi outside [0,1]");
  if (pi >= 1.0) return 1.0;
  if (pi <= 0.0) return 0.0;
  const double z = std::log1p(-pi) - std::log(pi) - log_T;
  return 1.0 / (1.0 + std::exp(z));  // exp overflow gives 0, underflow gives 1
}

double node_median(const NodePosterior& np) {
  if (np.pi_tilde <= 0.0) return 0.5;
  const double a0 = double(np.alpha0);
  const double a1 = double(np.alpha1);
  const double below_half = np.pi_tilde * reg_inc_beta(0.5, a0, a1);
  if (below_half >= 0.5) return beta_quantile(0.5 / np.pi_tilde, a0, a1);
  if (below_half + (1.0 - np.pi_tilde) >= 0.5) return 0.5;
  return beta_quantile((0.5 - (1.0 - np.pi_tilde)) / np.pi_tilde, a0, a1);
}

namespace {

// Top-down mass products over a full split tree. visit(l, k, parent_mass, y)
// is called once per node; leaf masses (depth = splits.depth()+1) come back.
template <typename Visit>
std::vector<double> leaf_masses(const DyadicTree<double>& splits, Visit&& visit) {
  std::vector<double> mass{1.0};
  for (int l = 0; l <= splits.depth(); ++l) {
    std::vector<double> next(mass.size() * 2);
    for (std::size_t k = 0; k < mass.size(); ++k) {
      const double y = splits.at(l, std::int64_t(k));
      visit(l, std::int64_t(k), mass[k], y);
      next[2 * k] = mass[k] * y;
      next[2 * k + 1] = mass[k] * (1.0 - y);
    }
    mass.swap(next);
  }
  return mass;
}

HistogramDensity mass_to_histogram(std::vector<double> mass, int depth) {
  for (auto& m : mass) m = std::ldexp(m, depth);
  return HistogramDensity(depth, std::move(mass));
}

}  // namespace

HistogramDensity histogram_from_splits(const DyadicTree<double>& splits) {
  const int depth = splits.depth() + 1;
  auto mass = leaf_masses(splits, [](int, std::int64_t, double, double) {});
  return mass_to_histogram(std::move(mass), depth);
}

WaveletField field_from_splits(const DyadicTree<double>& splits) {
  WaveletField out(splits.depth() + 1);
  leaf_masses(splits, [&out](int l, std::int64_t k, double p, double y) {
    out.set(l, k, coeff_from_tree(p, y, l));
  });
  return out;
}

PosteriorTree PosteriorTree::fit(std::span<const double> data,
                                 const PriorSpec& prior) {
  if (data.empty()) throw std::invalid_argument("fit: empty sample");
  prior.validate();
  return PosteriorTree(count_data(data, prior.depth), prior);
}

PosteriorTree::PosteriorTree(CountTree counts, const PriorSpec& prior)
    : prior_(prior), counts_(std::move(counts)), pi_tilde_(prior.depth) {
  prior_.validate();
  if (counts_.depth() != prior_.depth)
    throw std::invalid_argument("PosteriorTree: counts depth != prior depth");
  if (counts_.total < 1) throw std::invalid_argument("PosteriorTree: no data");
  for (int l = 0; l < prior_.depth; ++l) {
    const double pi = prior_.slab_weight(l);
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const std::int64_t n0 = counts_.count(l + 1, 2 * k);
      const std::int64_t n1 = counts_.count(l + 1, 2 * k + 1);
      pi_tilde_.at(l, k) =
          posterior_slab_weight(pi, log_bayes_factor(n0, n1, prior_.a));
    }
  }
}

NodePosterior PosteriorTree::node(int level, std::int64_t k) const {
  NodePosterior np;
  np.pi_tilde = pi_tilde_.at(level, k);
  np.alpha0 = counts_.count(level + 1, 2 * k) + prior_.a;
  np.alpha1 = counts_.count(level + 1, 2 * k + 1) + prior_.a;
  return np;
}

double PosteriorTree::split_mean(int level, std::int64_t k) const {
  const NodePosterior np = node(level, k);
  const double slab_mean = double(np.alpha0) / double(np.alpha0 + np.alpha1);
  return (1.0 - np.pi_tilde) * 0.5 + np.pi_tilde * slab_mean;
}

double PosteriorTree::split_median(int level, std::int64_t k) const {
  return node_median(node(level, k));
}

DyadicTree<double> PosteriorTree::sample_splits(std::uint64_t seed,
                                                std::uint64_t draw_index) const {
  if (depth() < 1)
    throw std::invalid_argument("sample_splits: tree has no split variables");
  DyadicTree<double> splits(depth() - 1, 0.5);
  for (int l = 0; l < depth(); ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const NodePosterior np = node(l, k);
      Rng rng = Rng::stream(seed, {draw_index, std::uint64_t(l), std::uint64_t(k)});
      if (rng.bernoulli(np.pi_tilde))
        splits.at(l, k) = rng.beta(double(np.alpha0), double(np.alpha1));
      // spike keeps the even split 1/2
    }
  return splits;
}

HistogramDensity PosteriorTree::sample_density(std::uint64_t seed,
                                               std::uint64_t draw_index) const {
  if (depth() == 0) return HistogramDensity::uniform(0);
  return histogram_from_splits(sample_splits(seed, draw_index));
}

HistogramDensity PosteriorTree::mean_density() const {
  if (depth() == 0) return HistogramDensity::uniform(0);
  DyadicTree<double> splits(depth() - 1, 0.5);
  for (int l = 0; l < depth(); ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
      splits.at(l, k) = split_mean(l, k);
  return histogram_from_splits(splits);
}

PosteriorTree::MedianDensity PosteriorTree::median_density() const {
  if (depth() == 0)
    return {HistogramDensity::uniform(0), WaveletField(0)};
  DyadicTree<double> splits(depth() - 1, 0.5);
  for (int l = 0; l < depth(); ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
      splits.at(l, k) = split_median(l, k);
  return {histogram_from_splits(splits), field_from_splits(splits)};
}

}  // namespace sspt
