#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sspt/dyadic.hpp"

namespace sspt {

/// Dyadic histogram density on (0,1]: 2^depth constant heights, one per leaf
/// interval. Densities built from tree mass splits integrate to 1 exactly;
/// arbitrary coefficient vectors may synthesize to signed histograms, which
/// are flagged via in_density_simplex().
class HistogramDensity {
 public:
  HistogramDensity(int depth, std::vector<double> heights);

  static HistogramDensity uniform(int depth);

  int depth() const { return depth_; }
  std::span<const double> heights() const { return heights_; }
  double height(std::int64_t k) const { return heights_[std::size_t(k)]; }

  /// Height of the leaf containing x, half-open convention.
  double value_at(double x) const;

  /// 2^-depth * sum of heights, compensated summation.
  double integral() const;

  double min_height() const;
  double max_height() const;

  /// Mass assigned to an arbitrary dyadic node (any level).
  double node_mass(NodeIndex node) const;

  /// Same density on a finer grid (heights repeated).
  HistogramDensity refined(int new_depth) const;

  /// False when synthesis produced a negative height, i.e. the coefficients
  /// were outside the density simplex.
  bool in_density_simplex() const { return simplex_; }

 private:
  int depth_;
  std::vector<double> heights_;
  bool simplex_;
};

/// Haar detail coefficients f_lk for 0 <= l < depth, 0 <= k < 2^l. The
/// scaling coefficient <f, phi> is implicitly 1 for densities.
class WaveletField {
 public:
  explicit WaveletField(int depth);

  int depth() const { return depth_; }
  double at(int l, std::int64_t k) const {
    return levels_[std::size_t(l)][std::size_t(k)];
  }
  void set(int l, std::int64_t k, double v) {
    levels_[std::size_t(l)][std::size_t(k)] = v;
  }
  std::span<const double> level(int l) const { return levels_[std::size_t(l)]; }
  std::span<double> level(int l) { return levels_[std::size_t(l)]; }

  /// Coefficient-wise difference, extending the shallower field with zeros.
  friend WaveletField operator-(const WaveletField& a, const WaveletField& b);

 private:
  int depth_;
  std::vector<std::vector<double>> levels_;
};

/// Admissible multiscale weights w_l > 0 with w_l/sqrt(l) nondecreasing.
class WeightSequence {
 public:
  explicit WeightSequence(std::function<double(int)> fn) : fn_(std::move(fn)) {}

  /// w_l = sqrt(max(l,2)) * ln(max(l,2)); clamping at 2 keeps the sequence
  /// positive at l in {0,1} where sqrt(l) log(l) vanishes.
  static WeightSequence admissible_default();

  double operator()(int l) const { return fn_(l); }

  /// Positivity and monotonicity of w_l/sqrt(l) up to max_level.
  bool is_admissible(int max_level) const;

 private:
  std::function<double(int)> fn_;
};

/// Haar analysis of a dyadic histogram: f_lk = 2^{l/2}(P(I_eps) - 2 P(I_eps0))
/// for all l < depth. Exact linear transform.
WaveletField haar_analyze(const HistogramDensity& f);

/// Inverse of haar_analyze under <f, phi> = 1: top-down mass splitting.
HistogramDensity haar_synthesize(const WaveletField& w);

/// Coefficient of the histogram induced by a mass split: given the parent
/// mass p of I_eps and the split value y = Y_eps0 at level l,
/// f_lk = 2^{l/2} p (1 - 2y).
double coeff_from_tree(double p_parent, double y, int level);

/// Projection K_j: zero all coefficients at levels >= j.
WaveletField project_Kj(const WaveletField& w, int j);

/// Exact supremum distance between two dyadic histograms; the coarser one is
/// refined to the finer grid first.
double sup_norm_distance(const HistogramDensity& f, const HistogramDensity& g);

/// Multiscale norm sup_l max_k |x_lk| / w_l over stored levels.
double multiscale_norm(const WaveletField& x, const WeightSequence& w);

/// Two-regime smoothness norm sup 2^{l(H(beta,l)+1/2)} |g_lk| with
/// H(beta,l) = beta for l <= L/alpha0 and alpha0 beyond.
double beta_L_norm(const WaveletField& g, double beta, int L, double alpha0);

/// True iff every stored coefficient satisfies |f_lk| <= R 2^{-l(alpha+1/2)}
/// (non-strict).
bool holder_ball_check(const WaveletField& g, double alpha, double R);

/// True iff ||K_j f - f||_inf >= eps 2^{-j alpha} for every checkable level
/// j0 <= j <= depth-1. A depth-L histogram has zero residual for j >= L, so
/// deeper levels cannot be checked and are not treated as passing; an empty
/// check range returns false.
bool self_similarity_check(const HistogramDensity& f, double alpha, double eps,
                           int j0);

}  // namespace sspt
