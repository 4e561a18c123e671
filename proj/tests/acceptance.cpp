// Acceptance suite: one scaled-down numerical reproduction per headline
// property of the method, plus the structural exactness and determinism
// gates. Each criterion prints a single PASS/FAIL line; the binary exits
// nonzero if any requested criterion fails.
//
// Usage: acceptance [criterion ...]   (no arguments runs all eight)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sspt/bands.hpp"
#include "sspt/io.hpp"
#include "sspt/posterior.hpp"
#include "sspt/rng.hpp"
#include "sspt/simlab.hpp"
#include "sspt/special.hpp"

using namespace sspt;
namespace fs = std::filesystem;

namespace {

int worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return int(std::clamp(hw, 1u, 8u));
}

constexpr std::uint64_t kSuiteSeed = 0x5eed5eed2024ULL;

// ---------------------------------------------------------------------------
// 1. Node-level conjugacy against the quadrature oracle.

bool criterion_1(std::string& detail) {
  Rng rng(kSuiteSeed + 1);
  double worst_pi = 0.0, worst_mean = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto total = std::int64_t(1 + std::floor(64.0 * rng.uniform01()));
    const auto n0 = std::int64_t(std::floor((double(total) + 1.0) * rng.uniform01()));
    const auto n1 = total - n0;
    const int a = 1 + int(std::floor(3.0 * rng.uniform01()));
    const double pi = 0.01 + 0.99 * rng.uniform01();

    const auto oracle = oracle_node_posterior(n0, n1, a, pi, 20000);
    const double pt = posterior_slab_weight(pi, log_bayes_factor(n0, n1, a));
    const double mean =
        (1.0 - pt) * 0.5 + pt * double(n0 + a) / double(n0 + n1 + 2 * a);
    worst_pi = std::max(worst_pi, std::fabs(oracle.pi_tilde - pt));
    worst_mean = std::max(worst_mean, std::fabs(oracle.mean_y - mean));
  }
  std::ostringstream os;
  os << "max|dpi|=" << worst_pi << " max|dEY|=" << worst_mean
     << " over 200 nodes (tol 1e-6)";
  detail = os.str();
  return worst_pi <= 1e-6 && worst_mean <= 1e-6;
}

// ---------------------------------------------------------------------------
// 2. Whole-tree conjugacy: the posterior factorizes over nodes, so every
//    split weight and mean must match its own node quadrature.

bool criterion_2(std::string& detail) {
  Rng rng(kSuiteSeed + 2);
  double worst = 0.0;
  for (int ds = 0; ds < 20; ++ds) {
    const auto n = std::int64_t(2 + std::floor(63.0 * rng.uniform01()));
    const int L = 1 + int(std::floor(3.0 * rng.uniform01()));
    std::vector<double> data(static_cast<std::size_t>(n));
    for (auto& x : data) {
      // mild skew so counts are not balanced by construction
      const double u = rng.uniform01_open_left();
      x = u * u * 0.999 + 0.0005;
    }
    PriorSpec prior;
    prior.a = 1 + int(std::floor(3.0 * rng.uniform01()));
    prior.kappa = 2.0 * rng.uniform01();
    prior.depth = L;
    prior.flat_depth = rng.bernoulli(0.5) ? 1 : 0;
    const PosteriorTree post = PosteriorTree::fit(data, prior);
    for (int l = 0; l < L; ++l) {
      const double pi = prior.slab_weight(l);
      for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
        const NodePosterior np = post.node(l, k);
        const auto oracle = oracle_node_posterior(
            np.alpha0 - prior.a, np.alpha1 - prior.a, prior.a, pi, 20000);
        worst = std::max(worst, std::fabs(oracle.pi_tilde - np.pi_tilde));
        worst = std::max(worst, std::fabs(oracle.mean_y - post.split_mean(l, k)));
      }
    }
  }
  std::ostringstream os;
  os << "max node deviation=" << worst << " over 20 datasets (tol 1e-6)";
  detail = os.str();
  return worst <= 1e-6;
}

// ---------------------------------------------------------------------------
// 3. Structural exactness: transforms, identities, integrals, special
//    functions.

bool criterion_3(std::string& detail) {
  Rng rng(kSuiteSeed + 3);
  double haar_err = 0.0, coeff_err = 0.0, integral_err = 0.0, special_err = 0.0;

  for (int depth : {1, 4, 8, 12}) {
    DyadicTree<double> splits(depth - 1, 0.5);
    for (int l = 0; l < depth; ++l)
      for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
        splits.at(l, k) = 0.05 + 0.9 * rng.uniform01();
    const HistogramDensity f = histogram_from_splits(splits);
    const HistogramDensity back = haar_synthesize(haar_analyze(f));
    haar_err = std::max(haar_err, sup_norm_distance(f, back));

    const WaveletField direct = field_from_splits(splits);
    const WaveletField inner = haar_analyze(f);
    for (int l = 0; l < depth; ++l)
      for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
        coeff_err =
            std::max(coeff_err, std::fabs(direct.at(l, k) - inner.at(l, k)));
  }

  {
    std::vector<double> data(1500);
    for (auto& x : data) x = rng.uniform01_open_left();
    const PosteriorTree post =
        PosteriorTree::fit(data, PriorSpec::for_sample_size(1500));
    integral_err = std::fabs(post.mean_density().integral() - 1.0);
    integral_err = std::max(
        integral_err, std::fabs(post.median_density().hist.integral() - 1.0));
    for (std::uint64_t d = 0; d < 50; ++d)
      integral_err = std::max(
          integral_err,
          std::fabs(post.sample_density(kSuiteSeed, d).integral() - 1.0));
  }

  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform01();
    const double b = 1.0 + std::floor(20.0 * rng.uniform01());
    special_err = std::max(special_err, std::fabs(reg_inc_beta(x, 1, 1) - x));
    special_err = std::max(
        special_err,
        std::fabs(reg_inc_beta(x, 1, b) - (1.0 - std::pow(1.0 - x, b))));
    special_err = std::max(
        special_err, std::fabs(reg_inc_beta(x, 2, 2) - x * x * (3.0 - 2.0 * x)));
    special_err =
        std::max(special_err, std::fabs(reg_inc_beta(0.5, b, b) - 0.5));
    const double p = 0.001 + 0.998 * rng.uniform01();
    special_err = std::max(
        special_err, std::fabs(beta_quantile(p, b, 1.0) - std::pow(p, 1.0 / b)));
  }

  std::ostringstream os;
  os << "haar=" << haar_err << " coeff=" << coeff_err
     << " integral=" << integral_err << " special=" << special_err;
  detail = os.str();
  return haar_err <= 1e-12 && coeff_err <= 1e-12 && integral_err <= 1e-12 &&
         special_err <= 1e-10;
}

// ---------------------------------------------------------------------------
// 4. Adaptive sup-norm rate.

bool criterion_4(std::string& detail) {
  RateConfig rc;
  rc.alphas = {0.5, 1.0};
  rc.ns = {1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16, 1 << 17};
  rc.reps = 50;
  rc.c = 0.3;
  rc.l1 = 1;
  rc.threads = worker_threads();
  const ExperimentReport report = rate_experiment(rc, kSuiteSeed + 4);

  bool ok = true;
  std::ostringstream os;
  for (const auto& r : report.rates) {
    const double target = -r.alpha / (2.0 * r.alpha + 1.0);
    const bool good = std::fabs(r.slope - target) <= 0.15;
    ok = ok && good;
    os << "alpha=" << r.alpha << " slope=" << r.slope << " target=" << target
       << (good ? " ok; " : " VIOLATION; ");
  }
  detail = os.str() + "(tol 0.15)";
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Thresholding behavior: no slab survives far beyond the oracle cutoff
//    and the median support depth stays below it.

bool criterion_5(std::string& detail) {
  const std::int64_t n = 1 << 15;
  const double alpha = 1.0;
  const double c = 0.3;
  const TestDensity truth = make_self_similar_density(alpha, c, 1, 13);
  const PriorSpec prior = PriorOverrides{}.resolve(n);
  const int cutoff = nonparametric_cutoff(n, alpha, c);  // oracle cutoff

  const int fits = 50;
  std::vector<std::int64_t> slabs(fits, 0), nodes(fits, 0);
  std::vector<int> lhat_good(fits, 0);
  {
    std::vector<std::thread> pool;
    const int T = worker_threads();
    for (int t = 0; t < T; ++t)
      pool.emplace_back([&, t]() {
        for (int rep = t; rep < fits; rep += T) {
          const auto data = sample_iid(truth.hist, n,
                                       mix64(kSuiteSeed + 5) + std::uint64_t(rep));
          const PosteriorTree post = PosteriorTree::fit(data, prior);
          std::int64_t s = 0, m = 0;
          for (int l = cutoff + 3; l < post.depth(); ++l)
            for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
              ++m;
              if (post.slab_weight_posterior(l, k) > 0.5) ++s;
            }
          slabs[std::size_t(rep)] = s;
          nodes[std::size_t(rep)] = m;
          lhat_good[std::size_t(rep)] =
              support_depth(post.median_density().coeffs) <= cutoff + 2 ? 1 : 0;
        }
      });
    for (auto& th : pool) th.join();
  }
  std::int64_t deep_nodes = 0, deep_slabs = 0;
  int lhat_ok = 0;
  for (int rep = 0; rep < fits; ++rep) {
    deep_slabs += slabs[std::size_t(rep)];
    deep_nodes += nodes[std::size_t(rep)];
    lhat_ok += lhat_good[std::size_t(rep)];
  }

  const double slab_fraction = double(deep_slabs) / double(deep_nodes);
  const double lhat_fraction = double(lhat_ok) / double(fits);
  std::ostringstream os;
  os << "slab fraction beyond cutoff+2=" << slab_fraction
     << " (<=0.01); L_hat<=" << cutoff + 2 << " in " << 100.0 * lhat_fraction
     << "% of fits (>=90%)";
  detail = os.str();
  return slab_fraction <= 0.01 && lhat_fraction >= 0.90;
}

// ---------------------------------------------------------------------------
// 6. Coverage, credibility, and the diameter-proxy rate.

bool criterion_6(std::string& detail) {
  CoverageConfig cc;
  cc.alpha = 0.5;
  cc.c = 0.3;
  cc.l1 = 1;
  cc.ns = {1 << 13, 1 << 15, 1 << 17};
  cc.reps = 200;
  cc.gamma = 0.05;
  cc.alpha0 = 0.5;
  cc.draws = 2000;
  cc.threads = worker_threads();
  const ExperimentReport report = coverage_experiment(cc, kSuiteSeed + 6);

  const CoveragePerN* mid = report.coverage.at_n(1 << 15);
  if (mid == nullptr) {
    detail = "missing aggregate at n=2^15";
    return false;
  }
  const double target = -cc.alpha / (2.0 * cc.alpha + 1.0);
  const double slope = report.coverage.proxy_slope;
  const double line_mid = report.coverage.proxy_line_at(1 << 15);

  const bool cov_ok = mid->coverage >= 0.90;
  const bool cred_ok =
      mid->mean_credibility >= 0.90 && mid->mean_credibility <= 1.0;
  const bool slope_ok = std::fabs(slope - target) <= 0.2;
  const bool line_ok = mid->mean_proxy <= 3.0 * line_mid;

  std::ostringstream os;
  os << "coverage=" << mid->coverage << " (>=0.90); credibility="
     << mid->mean_credibility << " (in [0.90,1]); proxy slope=" << slope
     << " target=" << target << " (tol 0.2); proxy@2^15=" << mid->mean_proxy
     << " vs line=" << line_mid << " (<=3x)";
  detail = os.str();
  return cov_ok && cred_ok && slope_ok && line_ok;
}

// ---------------------------------------------------------------------------
// 7. Coordinate-wise Bernstein-von Mises diagnostic plus its null
//    calibration.

bool criterion_7(std::string& detail) {
  BvmConfig bc;
  bc.n = 1 << 15;
  bc.draws = 2000;
  bc.ks_threshold = 0.1;
  const BvmReport report = bvm_experiment(bc, kSuiteSeed + 7);

  // Null calibration: exact Gaussian draws with the white-bridge variances
  // must clear the same threshold.
  int null_pass = 0;
  Rng rng(kSuiteSeed + 77);
  for (const auto& coord : report.coords) {
    std::vector<double> gauss(std::size_t(bc.draws));
    const double sd = std::sqrt(coord.variance);
    for (auto& g : gauss) g = sd * rng.normal();
    if (ks_distance_normal(gauss, sd) <= bc.ks_threshold) ++null_pass;
  }
  const double null_fraction =
      double(null_pass) / double(report.coords.size());

  std::ostringstream os;
  os << "pass fraction=" << report.pass_fraction << " over "
     << report.coords.size() << " coordinates (>=0.90); null calibration="
     << null_fraction << " (>=0.90)";
  detail = os.str();
  return report.pass_fraction >= 0.90 && null_fraction >= 0.90;
}

// ---------------------------------------------------------------------------
// 8. Byte-identical artifacts under a fixed seed.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool rerun_identical(const std::string& args,
                     const std::vector<std::string>& artifacts,
                     const fs::path& dir, std::string& detail) {
  const std::string cli = SSPT_CLI_PATH;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = cli + " " + args + " --out " +
                            (dir / run).string() + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      detail = "command failed: " + cmd;
      return false;
    }
  }
  for (const auto& name : artifacts) {
    const std::string a = slurp(dir / "a" / name);
    const std::string b = slurp(dir / "b" / name);
    if (a.empty() || a != b) {
      detail = "artifact differs or is empty: " + name;
      return false;
    }
  }
  return true;
}

bool criterion_8(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "sspt_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "data.txt");
    Rng rng(kSuiteSeed + 8);
    for (int i = 0; i < 2000; ++i)
      out << format_double(rng.uniform01_open_left()) << "\n";
  }

  std::string detail_fit, detail_sim, detail_band;
  const bool ok_fit = rerun_identical(
      "fit --input " + (dir / "data.txt").string() + " --seed 41",
      {"posterior.json", "mean_density.csv", "median_density.csv",
       "fhat_support.csv"},
      dir / "fit", detail_fit);
  const bool ok_sim = rerun_identical(
      "simulate --mode rates --alphas 1.0 --ns 1024,2048 --reps 2 --seed 17",
      {"report.csv", "summary.json"}, dir / "sim", detail_sim);
  const bool ok_band = rerun_identical(
      "band --input " + (dir / "data.txt").string() + " --seed 23 --draws 300",
      {"band.json", "envelope.csv"}, dir / "band", detail_band);

  std::ostringstream os;
  os << "fit " << (ok_fit ? "identical" : "DIFFERS: " + detail_fit)
     << "; simulate " << (ok_sim ? "identical" : "DIFFERS: " + detail_sim)
     << "; band " << (ok_band ? "identical" : "DIFFERS: " + detail_band);
  detail = os.str();
  return ok_fit && ok_sim && ok_band;
}

struct Criterion {
  int index;
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "conjugacy-oracle", criterion_1},
      {2, "whole-tree-conjugacy", criterion_2},
      {3, "structural-exactness", criterion_3},
      {4, "adaptive-rate", criterion_4},
      {5, "thresholding", criterion_5},
      {6, "coverage-credibility", criterion_6},
      {7, "bvm-diagnostic", criterion_7},
      {8, "determinism", criterion_8},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  bool all_ok = true;
  for (const auto& c : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.index) == wanted.end())
      continue;
    std::string detail;
    const bool ok = c.run(detail);
    all_ok = all_ok && ok;
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", c.index, c.name,
                detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
