#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sspt/dyadic.hpp"
#include "sspt/haar.hpp"
#include "sspt/prior.hpp"

namespace sspt {

/// Conjugate state of one split variable given the data: the slab is
/// Beta(alpha0, alpha1) = Beta(N(I_eps0)+a, N(I_eps1)+a) and the spike at
/// 1/2 keeps weight 1 - pi_tilde.
struct NodePosterior {
  double pi_tilde = 0.0;
  std::int64_t alpha0 = 1;
  std::int64_t alpha1 = 1;
};

/// ln T of the spike-versus-slab Bayes factor at one node:
/// (n0+n1) ln 2 + ln B(n0+a, n1+a) - ln B(a, a). Evaluated in log space so
/// counts up to 1e9 cannot overflow.
double log_bayes_factor(std::int64_t n0, std::int64_t n1, int a);

/// Posterior slab weight pi T / ((1-pi) + pi T), computed from ln T as
/// 1 / (1 + exp(ln(1-pi) - ln pi - ln T)). Exact at pi = 0 and pi = 1.
double posterior_slab_weight(double pi, double log_T);

/// Generalized median inf{t : F(t) >= 1/2} of the spike-and-slab mixture
/// (1-pi_tilde) delta_{1/2} + pi_tilde Beta(alpha0, alpha1).
double node_median(const NodePosterior& np);

/// Heights 2^L * prod(Y) of the histogram induced by a full tree of split
/// values (split value at node (l,k) is the mass fraction of the left
/// child); splits has levels 0..L-1.
HistogramDensity histogram_from_splits(const DyadicTree<double>& splits);

/// Haar coefficients 2^{l/2} p_eps (1 - 2 Y_eps0) of the same histogram.
WaveletField field_from_splits(const DyadicTree<double>& splits);

/// Exact posterior of a spike-and-slab Polya tree fit: per internal node the
/// conjugate update keeps the spike-and-slab form with new Beta parameters
/// and slab weight. Immutable after construction; sampling is safe from
/// concurrent threads.
class PosteriorTree {
 public:
  /// Bins the data at the prior truncation depth and applies the node-wise
  /// conjugate update. Throws on empty data or data outside (0,1].
  static PosteriorTree fit(std::span<const double> data, const PriorSpec& prior);

  /// Conjugate update from precomputed counts (counts.depth() must equal
  /// prior.depth).
  PosteriorTree(CountTree counts, const PriorSpec& prior);

  int depth() const { return prior_.depth; }
  std::int64_t total() const { return counts_.total; }
  const PriorSpec& prior() const { return prior_; }
  const CountTree& counts() const { return counts_; }

  NodePosterior node(int level, std::int64_t k) const;
  double slab_weight_posterior(int level, std::int64_t k) const {
    return pi_tilde_.at(level, k);
  }

  /// Posterior mean E[Y_eps0 | X] = (1-pi~)/2 + pi~ alpha0/(alpha0+alpha1).
  double split_mean(int level, std::int64_t k) const;
  /// Posterior median of Y_eps0 (exactly 1/2 when the spike dominates).
  double split_median(int level, std::int64_t k) const;

  /// One draw of all split variables; the stream of each node is derived
  /// from (seed, draw_index, level, position), so draws are independent of
  /// traversal order and bit-reproducible.
  DyadicTree<double> sample_splits(std::uint64_t seed,
                                   std::uint64_t draw_index) const;

  /// Histogram of one posterior draw; integrates to 1 by telescoping.
  HistogramDensity sample_density(std::uint64_t seed,
                                  std::uint64_t draw_index) const;

  /// Tree-type posterior mean density.
  HistogramDensity mean_density() const;

  struct MedianDensity {
    HistogramDensity hist;
    WaveletField coeffs;  // nonzero exactly where the split median is not 1/2
  };
  /// Coordinate-wise posterior-median pivot density and its coefficients.
  MedianDensity median_density() const;

 private:
  PriorSpec prior_;
  CountTree counts_;
  DyadicTree<double> pi_tilde_;  // parent levels 0..depth-1; deepest level unused
};

}  // namespace sspt
