#include "sspt/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sspt/rng.hpp"
#include "sspt/special.hpp"

namespace sspt {

namespace {

// Stream tags so that data, radius, credibility/proxy and sup-error draws
// never share a generator.
constexpr std::uint64_t kTagData = 0x01;
constexpr std::uint64_t kTagRadius = 0x02;
constexpr std::uint64_t kTagProxy = 0x03;
constexpr std::uint64_t kTagSupDraws = 0x04;
constexpr std::uint64_t kTagRep = 0x05;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return mix64(h ^ c);
}

void run_parallel(int tasks, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, tasks));
  if (threads == 1) {
    for (int i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < tasks; i += threads) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

TestDensity finalize(TruthKind kind, WaveletField coeffs, double alpha,
                     double R, double eps, int l1) {
  TestDensity out;
  out.kind = kind;
  out.hist = haar_synthesize(coeffs);
  out.coeffs = std::move(coeffs);
  out.alpha = alpha;
  out.R = R;
  out.eps = eps;
  out.l1 = l1;
  out.m0 = out.hist.min_height();
  out.m1 = out.hist.max_height();
  return out;
}

}  // namespace

TestDensity make_uniform_density(int depth) {
  TestDensity out;
  out.kind = TruthKind::kUniform;
  out.hist = HistogramDensity::uniform(depth);
  out.coeffs = WaveletField(depth);
  return out;
}

TestDensity make_self_similar_density(double alpha, double c, int l1, int depth) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("make_self_similar_density: alpha outside (0,1]");
  if (c < 0.0 || l1 < 0 || depth < 0)
    throw std::invalid_argument("make_self_similar_density: bad parameters");
  if (c > 0.0) {
    const double tail = c * std::exp2(-l1 * alpha) / (1.0 - std::exp2(-alpha));
    if (tail >= 1.0)
      throw std::invalid_argument(
          "make_self_similar_density: amplitude violates positivity, "
          "c 2^{-l1 a}/(1-2^{-a}) = " +
          std::to_string(tail) + " >= 1");
  }
  WaveletField coeffs(depth);
  for (int l = l1; l < depth; ++l) {
    const double v = c * std::exp2(-l * (0.5 + alpha));
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) coeffs.set(l, k, v);
  }
  return finalize(TruthKind::kSelfSimilar, std::move(coeffs), alpha, c, c, l1);
}

TestDensity make_holder_density(double alpha, double R, int depth,
                                std::uint64_t sign_seed) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("make_holder_density: alpha outside (0,1]");
  if (R < 0.0 || depth < 0)
    throw std::invalid_argument("make_holder_density: bad parameters");
  if (R > 0.0) {
    double worst = 0.0;
    for (int l = 0; l < depth; ++l) worst += R * std::exp2(-l * alpha);
    if (worst >= 1.0)
      throw std::invalid_argument(
          "make_holder_density: amplitude violates positivity, R sum 2^{-l a} = " +
          std::to_string(worst) + " >= 1");
  }
  WaveletField coeffs(depth);
  Rng rng = Rng::stream(sign_seed, {0x484c4452});
  for (int l = 0; l < depth; ++l) {
    const double envelope = R * std::exp2(-l * (0.5 + alpha));
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const double frac = 0.5 + 0.5 * rng.uniform01();
      const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      coeffs.set(l, k, sign * frac * envelope);
    }
  }
  return finalize(TruthKind::kHolder, std::move(coeffs), alpha, R, 0.0, 0);
}

std::vector<double> sample_iid(const HistogramDensity& f, std::int64_t n,
                               std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample_iid: negative n");
  if (!f.in_density_simplex())
    throw std::invalid_argument("sample_iid: not a density");
  const auto heights = f.heights();
  std::vector<double> cum(heights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < heights.size(); ++k) {
    acc += std::ldexp(heights[k], -f.depth());
    cum[k] = acc;
  }
  cum.back() = 1.0;  // absorb rounding so u = 1 always lands
  const double width = std::ldexp(1.0, -f.depth());
  Rng rng = Rng::stream(seed, {kTagData});
  std::vector<double> out;
  out.reserve(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = rng.uniform01_open_left();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const auto k = std::size_t(it - cum.begin());
    const double prev = k == 0 ? 0.0 : cum[k - 1];
    const double lo = double(k) * width;
    // The located leaf always has positive mass: u > cum[k-1] by minimality.
    double x = lo + (u - prev) / heights[k];
    if (x <= lo) x = std::nextafter(lo, 1.0);
    const double hi = lo + width;
    if (x > hi) x = hi;
    out.push_back(x);
  }
  return out;
}

OracleNodePosterior oracle_node_posterior(std::int64_t n0, std::int64_t n1,
                                          int a, double pi, int grid_size) {
  if (n0 < 0 || n1 < 0 || a < 1)
    throw std::invalid_argument("oracle_node_posterior: bad node");
  if (!(pi >= 0.0) || !(pi <= 1.0))
    throw std::invalid_argument("oracle_node_posterior: pi outside [0,1]");
  if (grid_size < 10000)
    throw std::invalid_argument("oracle_node_posterior: grid too coarse");

  // Likelihood y^{n0}(1-y)^{n1} against the slab Beta(a,a) density.
  const double e0 = double(n0 + a - 1);
  const double e1 = double(n1 + a - 1);
  auto integrand = [&](double y, double extra_power) -> double {
    const double p0 = e0 + extra_power;
    if (y <= 0.0) return p0 == 0.0 ? 1.0 : 0.0;
    if (y >= 1.0) return e1 == 0.0 ? 1.0 : 0.0;
    return std::exp(p0 * std::log(y) + e1 * std::log1p(-y));
  };
  const double h = 1.0 / double(grid_size);
  double sum = 0.5 * (integrand(0.0, 0.0) + integrand(1.0, 0.0));
  double sum_y = 0.5 * integrand(1.0, 1.0);
  for (int i = 1; i < grid_size; ++i) {
    const double y = double(i) * h;
    sum += integrand(y, 0.0);
    sum_y += integrand(y, 1.0);
  }
  const double inv_beta = std::exp(-log_beta(double(a), double(a)));
  const double slab_mass = pi * sum * h * inv_beta;
  const double slab_y = pi * sum_y * h * inv_beta;
  const double spike_mass = (1.0 - pi) * std::ldexp(1.0, -int(n0 + n1));

  OracleNodePosterior out;
  const double total = spike_mass + slab_mass;
  out.pi_tilde = slab_mass / total;
  out.mean_y = (0.5 * spike_mass + slab_y) / total;
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double resolve_un(const std::string& mode, std::int64_t n) {
  if (mode == "logn") return std::log(double(n));
  if (mode == "loglogn") return std::log(std::log(double(n)));
  return std::stod(mode);
}

PriorSpec PriorOverrides::resolve(std::int64_t n) const {
  PriorSpec spec;
  spec.a = a;
  spec.kappa = kappa;
  spec.schedule = schedule;
  spec.depth = depth >= 0 ? depth : truncation_level(n);
  spec.flat_depth =
      flat_depth >= 0 ? std::min(flat_depth, spec.depth) : default_flat_depth(n);
  spec.validate();
  return spec;
}

const CoveragePerN* CoverageSummary::at_n(std::int64_t n) const {
  for (const auto& e : per_n)
    if (e.n == n) return &e;
  return nullptr;
}

double CoverageSummary::proxy_line_at(std::int64_t n) const {
  const double x = std::log(double(n) / std::log(double(n)));
  return std::exp(proxy_intercept + proxy_slope * x);
}

ExperimentReport rate_experiment(const RateConfig& config, std::uint64_t seed) {
  if (config.reps < 1) throw std::invalid_argument("rate_experiment: reps < 1");
  if (config.ns.empty() || config.alphas.empty())
    throw std::invalid_argument("rate_experiment: empty grid");
  const std::int64_t max_n = *std::max_element(config.ns.begin(), config.ns.end());
  const int truth_depth = config.truth_depth >= 0
                              ? config.truth_depth
                              : truncation_level(max_n) + 3;

  ExperimentReport report;
  report.mode = "rates";
  const std::size_t cells = config.alphas.size() * config.ns.size();
  report.records.resize(cells * std::size_t(config.reps));

  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    const double alpha = config.alphas[ai];
    const TestDensity truth =
        make_self_similar_density(alpha, config.c, config.l1, truth_depth);
    for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
      const std::int64_t n = config.ns[ni];
      const PriorSpec prior = config.prior.resolve(n);
      const std::size_t base =
          (ai * config.ns.size() + ni) * std::size_t(config.reps);
      run_parallel(config.reps, config.threads, [&](int rep) {
        const std::uint64_t rep_seed =
            derive_seed(seed, kTagRep, (ai << 32) | ni, std::uint64_t(rep));
        const auto data = sample_iid(truth.hist, n, derive_seed(rep_seed, kTagData));
        const PosteriorTree post = PosteriorTree::fit(data, prior);

        ExperimentRecord rec;
        rec.mode = "rates";
        rec.alpha = alpha;
        rec.n = n;
        rec.rep = rep;
        rec.seed = rep_seed;
        rec.sup_err_mean = sup_norm_distance(post.mean_density(), truth.hist);
        double acc = 0.0;
        for (int j = 0; j < config.sup_draws; ++j)
          acc += sup_norm_distance(
              post.sample_density(derive_seed(rep_seed, kTagSupDraws), std::uint64_t(j)),
              truth.hist);
        rec.sup_err_draws = config.sup_draws > 0 ? acc / config.sup_draws : -1.0;
        const auto med = post.median_density();
        rec.L_hat = support_depth(med.coeffs);
        rec.alpha_hat = alpha_hat(rec.L_hat, n, config.alpha0);
        report.records[base + std::size_t(rep)] = rec;
      });
    }
  }

  // Slope of log mean sup-error against log(n / ln n), one line per alpha.
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    RateSummary summary;
    summary.alpha = config.alphas[ai];
    std::vector<double> xs, ys;
    for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
      const std::int64_t n = config.ns[ni];
      const std::size_t base =
          (ai * config.ns.size() + ni) * std::size_t(config.reps);
      double mean = 0.0;
      for (int rep = 0; rep < config.reps; ++rep)
        mean += report.records[base + std::size_t(rep)].sup_err_mean;
      mean /= double(config.reps);
      summary.mean_err_by_n.emplace_back(n, mean);
      xs.push_back(std::log(double(n) / std::log(double(n))));
      ys.push_back(std::log(mean));
    }
    summary.slope = xs.size() >= 2 ? fit_line(xs, ys).slope : 0.0;
    report.rates.push_back(std::move(summary));
  }
  return report;
}

ExperimentReport coverage_experiment(const CoverageConfig& config,
                                     std::uint64_t seed) {
  if (config.reps < 1) throw std::invalid_argument("coverage_experiment: reps < 1");
  if (config.ns.empty())
    throw std::invalid_argument("coverage_experiment: empty grid");

  ExperimentReport report;
  report.mode = "coverage";
  report.records.resize(config.ns.size() * std::size_t(config.reps));

  for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
    const std::int64_t n = config.ns[ni];
    const int truth_depth =
        config.truth_depth >= 0 ? config.truth_depth : truncation_level(n) + 3;
    const TestDensity truth =
        make_self_similar_density(config.alpha, config.c, config.l1, truth_depth);
    const WaveletField& truth_coeffs = truth.coeffs;
    const PriorSpec prior = config.prior.resolve(n);
    BandSpec spec;
    spec.gamma = config.gamma;
    spec.alpha0 = config.alpha0;
    spec.draws = config.draws;
    spec.u_n = resolve_un(config.un, n);
    spec.envelope_R = std::max(config.c, 0.25);  // cutoff constant 4R^2 >= 1/4

    const std::size_t base = ni * std::size_t(config.reps);
    run_parallel(config.reps, config.threads, [&](int rep) {
      const std::uint64_t rep_seed =
          derive_seed(seed, kTagRep, std::uint64_t(ni), std::uint64_t(rep));
      const auto data = sample_iid(truth.hist, n, derive_seed(rep_seed, kTagData));
      const PosteriorTree post = PosteriorTree::fit(data, prior);
      const Centering cn = centering_Cn(data);
      const auto med = post.median_density();

      ExperimentRecord rec;
      rec.mode = "coverage";
      rec.alpha = config.alpha;
      rec.n = n;
      rec.rep = rep;
      rec.seed = rep_seed;
      rec.L_hat = support_depth(med.coeffs);
      rec.alpha_hat = alpha_hat(rec.L_hat, n, config.alpha0);
      rec.Rn = radius_Rn(post, cn, spec, derive_seed(rep_seed, kTagRadius));
      rec.covered =
          band_membership(truth_coeffs, cn, rec.Rn, rec.alpha_hat, spec) ? 1 : 0;
      const DiameterProxy proxy = band_diameter_proxy(
          post, cn, rec.Rn, rec.alpha_hat, spec, derive_seed(rep_seed, kTagProxy));
      rec.credibility = double(proxy.accepted) / double(proxy.draws);
      rec.diameter_proxy = proxy.value;
      rec.accepted = proxy.accepted;
      report.records[base + std::size_t(rep)] = rec;
    });
  }

  std::vector<double> xs, ys;
  for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
    const std::int64_t n = config.ns[ni];
    const std::size_t base = ni * std::size_t(config.reps);
    CoveragePerN agg;
    agg.n = n;
    double proxy_mean = 0.0;
    for (int rep = 0; rep < config.reps; ++rep) {
      const auto& rec = report.records[base + std::size_t(rep)];
      agg.coverage += rec.covered == 1 ? 1.0 : 0.0;
      agg.mean_credibility += rec.credibility;
      proxy_mean += rec.diameter_proxy;
    }
    agg.coverage /= double(config.reps);
    agg.mean_credibility /= double(config.reps);
    agg.mean_proxy = proxy_mean / double(config.reps);
    report.coverage.per_n.push_back(agg);
    if (agg.mean_proxy > 0.0) {
      xs.push_back(std::log(double(n) / std::log(double(n))));
      ys.push_back(std::log(agg.mean_proxy));
    }
  }
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    report.coverage.proxy_slope = fit.slope;
    report.coverage.proxy_intercept = fit.intercept;
  }
  return report;
}

BvmReport bvm_experiment(const BvmConfig& config, std::uint64_t seed) {
  const int truth_depth = config.truth_depth >= 0
                              ? config.truth_depth
                              : truncation_level(config.n) + 3;
  const TestDensity truth = make_uniform_density(truth_depth);
  const auto data =
      sample_iid(truth.hist, config.n, derive_seed(seed, kTagData));
  const PriorSpec prior = config.prior.resolve(config.n);
  const PosteriorTree post = PosteriorTree::fit(data, prior);
  const Centering cn = centering_Cn(data);
  return bvm_diagnostic(post, cn, truth.hist, prior.flat_depth, config.draws,
                        config.ks_threshold, derive_seed(seed, kTagProxy));
}

}  // namespace sspt
