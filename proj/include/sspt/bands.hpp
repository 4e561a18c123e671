#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sspt/haar.hpp"
#include "sspt/posterior.hpp"

namespace sspt {

enum class CenteringKind { kCn, kTn };

/// Truncated empirical coefficients <P_n, psi_lk>: the smoothed empirical
/// measure used to recenter the posterior. Cn keeps levels up to the sample
/// truncation level L, Tn up to the regularity-dependent cutoff.
struct Centering {
  CenteringKind kind = CenteringKind::kCn;
  WaveletField coeffs{0};
  int cutoff = 0;       // deepest retained coefficient level (inclusive)
  int trunc_level = 0;  // the sample's truncation level L
  std::int64_t n = 0;
};

/// Exact averages (1/n) sum_i psi_lk(X_i) for all levels <= max_level, with
/// the half-open evaluation convention for psi.
WaveletField empirical_coeffs(std::span<const double> data, int max_level);

Centering centering_Cn(std::span<const double> data);

/// Regularity-dependent cutoff: floor(log2(4 R^2 (n/ln n)^{1/(1+2 alpha)})),
/// clamped to [1, truncation_level(n)].
int nonparametric_cutoff(std::int64_t n, double alpha, double R);

Centering centering_Tn(std::span<const double> data, double alpha, double R);

/// Deepest level carrying a nonzero coefficient; 0 if the field is
/// identically zero.
int support_depth(const WaveletField& fhat);

/// Regularity estimate 0.5 [ (1/L_hat) log2(n / ln n) - 1 ], clamped to
/// [alpha0, 1]; the empty-support sentinel L_hat = 0 maps to 1.
double alpha_hat(int L_hat, std::int64_t n, double alpha0);

/// Holder envelope |f_lk| <= R 2^{-l(alpha+1/2)} describing a truth beyond
/// its stored depth.
struct HolderEnvelope {
  double alpha = 1.0;
  double R = 1.0;
};

struct BandSpec {
  double gamma = 0.05;  // credibility deficit
  WeightSequence w = WeightSequence::admissible_default();
  double u_n = 0.0;      // regularity-norm budget, e.g. ln n
  double alpha0 = 0.5;   // minimal regularity adapted to
  int draws = 2000;      // Monte Carlo draws for the radius
  double envelope_R = 1.0;  // R in the 4R^2 cutoff constant of the
                            // diameter-proxy centering
};

/// Monte Carlo radius: the upper generalized (1-gamma)-quantile of
/// sqrt(n) ||f - center||_{M0(w)} over spec.draws posterior draws.
double radius_Rn(const PosteriorTree& post, const Centering& center,
                 const BandSpec& spec, std::uint64_t seed);

/// Both band constraints on a candidate truth: the multiscale ball
/// ||f0 - center|| <= Rn/sqrt(n) and the regularity bound
/// ||f0||_{alpha_hat, L} <= u_n. Exact for histogram truths (tails vanish);
/// an optional envelope adds the analytic tail bound beyond f0's stored
/// depth (requires envelope alpha >= spec.alpha0).
bool band_membership(const WaveletField& f0, const Centering& center,
                     double Rn, double alpha_hat_value, const BandSpec& spec,
                     const HolderEnvelope* envelope = nullptr);

/// Convenience overload for histogram truths.
bool band_membership(const HistogramDensity& f0, const Centering& center,
                     double Rn, double alpha_hat_value, const BandSpec& spec,
                     const HolderEnvelope* envelope = nullptr);

struct DiameterProxy {
  double value = 0.0;
  int accepted = 0;
  int draws = 0;
  bool degenerate() const { return accepted < 10; }
};

/// Empirical sup-norm diameter surrogate: twice the largest distance from an
/// accepted posterior draw (one inside the band) to the centering truncated
/// at the cutoff for alpha_hat. Lower-bounds the true band diameter.
DiameterProxy band_diameter_proxy(const PosteriorTree& post,
                                  const Centering& center, double Rn,
                                  double alpha_hat_value, const BandSpec& spec,
                                  std::uint64_t seed);

/// Exact Gram matrix Cov(psi_lk, psi_l'k') under the histogram density f0:
/// int psi psi' f0 - (int psi f0)(int psi' f0), closed form on dyadic cells.
std::vector<std::vector<double>> white_bridge_covariance(
    const HistogramDensity& f0, std::span<const NodeIndex> nodes);

/// One-sample Kolmogorov-Smirnov distance between the samples and the
/// centered normal law with standard deviation sigma.
double ks_distance_normal(std::vector<double> samples, double sigma);

struct BvmCoordinate {
  int level = 0;
  std::int64_t position = 0;
  double ks = 0.0;
  double variance = 0.0;
  bool pass = false;
};

struct BvmReport {
  std::vector<BvmCoordinate> coords;
  double pass_fraction = 0.0;
};

/// Coordinate-wise Gaussian diagnostic: for every (l,k) with l <= max_level,
/// the KS distance between draws of sqrt(n)(f_lk - center_lk) and
/// Normal(0, Var_{f0}(psi_lk)). Meaningful under a flat-initialisation prior
/// covering those levels.
BvmReport bvm_diagnostic(const PosteriorTree& post, const Centering& center,
                         const HistogramDensity& f0, int max_level, int draws,
                         double ks_threshold, std::uint64_t seed);

struct BandResult {
  double Rn = 0.0;
  double alpha_hat = 1.0;
  int L_hat = 0;
  double u_n = 0.0;
  double gamma = 0.0;
  std::optional<bool> member;
  double diameter_proxy = 0.0;
  int accepted = 0;
  int draws = 0;
  std::uint64_t seed = 0;
};

}  // namespace sspt
