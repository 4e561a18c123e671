#pragma once

#include <cstdint>

namespace sspt {

/// Depth profile of the prior slab weights pi_l.
enum class SlabSchedule {
  kExponential,            // pi_l = exp(-kappa l)
  kExponentialNormalized,  // pi_l = exp(-kappa l) / sum_{j<=L} exp(-kappa j)
  kLLogL,                  // pi_l = exp(-kappa l ln l)
};

/// Default thresholding rate. The provable constant kappa_theory() drives
/// every slab weight to numerical zero at realistic sample sizes, so the
/// working default is a calibrated small constant.
inline constexpr double kDefaultKappa = 1.3862943611198906;  // 2 ln 2

/// Spike-and-slab Polya tree prior: independent mass splits
/// Y_eps0 ~ (1-pi) delta_{1/2} + pi Beta(a,a) down to the truncation depth,
/// with the slab forced (pi = 1) on the first flat_depth+1 generations when
/// flat initialisation is enabled.
struct PriorSpec {
  int a = 1;           // integer Beta(a,a) slab parameter, a >= 1
  double kappa = kDefaultKappa;
  int depth = 0;       // truncation level L; split variables live at depths < L
  int flat_depth = 0;  // l0: splits owned by nodes at depths <= l0 are
                       // slab-always; 0 disables flat initialisation
  SlabSchedule schedule = SlabSchedule::kExponentialNormalized;

  /// L = truncation_level(n), l0 = default_flat_depth(n), defaults elsewhere.
  static PriorSpec for_sample_size(std::int64_t n);

  /// Prior slab weight of the split variable owned by a node at the given
  /// depth (the variable itself sits one generation deeper).
  double slab_weight(int parent_depth) const;

  void validate() const;
};

/// Flat-initialisation depth l0(n) ~ ln n / ln ln n, at least 1 and at most
/// the truncation level.
int default_flat_depth(std::int64_t n);

/// Smallest provably sufficient thresholding rate for densities bounded in
/// [m0, m1]: 576 m1/m0 + 5 ln 2.
double kappa_theory(double m0, double m1);

}  // namespace sspt
