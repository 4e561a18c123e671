#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sspt/bands.hpp"
#include "sspt/haar.hpp"
#include "sspt/posterior.hpp"
#include "sspt/prior.hpp"

namespace sspt {

enum class TruthKind { kUniform, kHolder, kSelfSimilar };

/// Ground-truth density: an exact dyadic histogram together with the class
/// metadata it satisfies by construction.
struct TestDensity {
  TruthKind kind = TruthKind::kUniform;
  HistogramDensity hist{0, {1.0}};
  WaveletField coeffs{0};  // the exact constructed coefficients (no round trip)
  double alpha = 1.0;      // Holder exponent of the construction
  double R = 0.0;          // Holder envelope constant
  double eps = 0.0;        // self-similarity constant (kSelfSimilar only)
  int l1 = 0;              // first level carrying signal
  double m0 = 1.0;         // realized min height
  double m1 = 1.0;         // realized max height
};

TestDensity make_uniform_density(int depth);

/// f = 1 + c sum_{l=l1}^{depth-1} 2^{-l(1/2+alpha)} sum_k psi_lk. Every
/// coefficient sits exactly on the Holder envelope with constant c, and the
/// residual past level j is concentrated at the right edge, so the
/// self-similarity inequality holds with eps = c from level max(l1,1) on.
/// Throws when c 2^{-l1 alpha} / (1 - 2^{-alpha}) >= 1 (positivity bound).
TestDensity make_self_similar_density(double alpha, double c, int l1, int depth);

/// Random-sign coefficients at a random fraction (in [1/2, 1]) of the Holder
/// envelope R 2^{-l(alpha+1/2)}. Throws when the worst-case signed sum can
/// reach zero height.
TestDensity make_holder_density(double alpha, double R, int depth,
                                std::uint64_t sign_seed);

/// Exact inverse-CDF sampling from a dyadic histogram; the piecewise-linear
/// CDF is inverted in closed form per leaf. All values land in (0,1].
std::vector<double> sample_iid(const HistogramDensity& f, std::int64_t n,
                               std::uint64_t seed);

struct OracleNodePosterior {
  double pi_tilde = 0.0;
  double mean_y = 0.5;
};

/// Independent check of the node-level conjugate update: trapezoid
/// quadrature of y^{n0}(1-y)^{n1} against (1-pi) delta_{1/2} + pi Beta(a,a),
/// with no reference to the closed forms it validates.
OracleNodePosterior oracle_node_posterior(std::int64_t n0, std::int64_t n1,
                                          int a, double pi, int grid_size);

/// Regularity budget from its mode string: "logn" -> ln n, "loglogn" ->
/// ln ln n, anything else parses as a fixed number.
double resolve_un(const std::string& mode, std::int64_t n);

/// Least-squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Prior knobs shared by the experiments; depth/flat default to the
/// per-sample-size rules when negative.
struct PriorOverrides {
  int a = 1;
  double kappa = kDefaultKappa;
  SlabSchedule schedule = SlabSchedule::kExponentialNormalized;
  int flat_depth = -1;  // -1: default_flat_depth(n)
  int depth = -1;       // -1: truncation_level(n)

  PriorSpec resolve(std::int64_t n) const;
};

struct ExperimentRecord {
  std::string mode;
  double alpha = 0.0;
  std::int64_t n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double sup_err_mean = -1.0;
  double sup_err_draws = -1.0;
  int L_hat = -1;
  double alpha_hat = -1.0;
  double Rn = -1.0;
  int covered = -1;  // 1/0, -1 when not applicable
  double credibility = -1.0;
  double diameter_proxy = -1.0;
  int accepted = -1;
};

struct RateSummary {
  double alpha = 0.0;
  double slope = 0.0;
  std::vector<std::pair<std::int64_t, double>> mean_err_by_n;
};

struct CoveragePerN {
  std::int64_t n = 0;
  double coverage = 0.0;
  double mean_credibility = 0.0;
  double mean_proxy = 0.0;
};

struct CoverageSummary {
  std::vector<CoveragePerN> per_n;
  double proxy_slope = 0.0;
  double proxy_intercept = 0.0;

  const CoveragePerN* at_n(std::int64_t n) const;
  /// Value of the proxy regression line at sample size n.
  double proxy_line_at(std::int64_t n) const;
};

struct ExperimentReport {
  std::string mode;
  std::vector<ExperimentRecord> records;
  std::vector<RateSummary> rates;    // mode == "rates"
  CoverageSummary coverage;          // mode == "coverage"
};

struct RateConfig {
  std::vector<double> alphas{0.5, 1.0};
  std::vector<std::int64_t> ns{1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16, 1 << 17};
  int reps = 50;
  double c = 0.3;              // amplitude of the self-similar truth
  int l1 = 1;
  int truth_depth = -1;        // -1: truncation_level(max n) + 3
  int sup_draws = 10;          // posterior draws per fit for sampled sup errors
  double alpha0 = 0.1;         // floor for the recorded alpha_hat
  PriorOverrides prior;
  int threads = 1;
};

/// Fits over the (alpha, n, rep) grid, records sup-norm errors of the
/// posterior mean and of posterior draws, and regresses log mean error on
/// log(n / ln n) per alpha.
ExperimentReport rate_experiment(const RateConfig& config, std::uint64_t seed);

struct CoverageConfig {
  double alpha = 0.5;
  double c = 0.3;
  int l1 = 1;
  std::vector<std::int64_t> ns{1 << 15};
  int reps = 200;
  int truth_depth = -1;     // -1: truncation_level(n) + 3, per n
  double gamma = 0.05;
  double alpha0 = 0.5;
  int draws = 2000;
  std::string un = "logn";  // "logn", "loglogn", or a numeric literal
  PriorOverrides prior;
  int threads = 1;
};

/// Per replication: fit, alpha_hat, radius, membership of the truth, band
/// credibility (acceptance fraction of fresh draws) and the diameter proxy;
/// aggregates coverage per n and the proxy rate regression across n.
ExperimentReport coverage_experiment(const CoverageConfig& config,
                                     std::uint64_t seed);

struct BvmConfig {
  std::int64_t n = 1 << 15;
  int draws = 2000;
  double ks_threshold = 0.1;
  int truth_depth = -1;  // -1: truncation_level(n) + 3
  PriorOverrides prior;  // flat_depth resolves to the default l0(n)
};

/// Uniform-truth Gaussian diagnostic at all coordinates with l <= l0.
BvmReport bvm_experiment(const BvmConfig& config, std::uint64_t seed);

}  // namespace sspt
