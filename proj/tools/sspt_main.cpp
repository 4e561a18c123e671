// Batch front door: fit the spike-and-slab Polya tree posterior on a sample,
// compute adaptive credible bands, or run the Monte Carlo experiment modes.
// Exit codes: 0 success, 2 input/config error, 3 degenerate result.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sspt/bands.hpp"
#include "sspt/io.hpp"
#include "sspt/posterior.hpp"
#include "sspt/rng.hpp"
#include "sspt/simlab.hpp"

namespace fs = std::filesystem;
using namespace sspt;

namespace {

struct PriorFlags {
  int a = 1;
  double kappa = kDefaultKappa;
  std::string schedule = "exponential-normalized";
  int l0 = -1;     // -1: ln n / ln ln n default
  int depth = -1;  // -1: truncation_level(n)

  void attach(CLI::App* cmd) {
    cmd->add_option("--a", a, "slab Beta(a,a) parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--kappa", kappa, "slab decay rate")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--schedule", schedule, "pi_l profile")
        ->check(CLI::IsMember({"exponential", "exponential-normalized", "l-log-l"}));
    cmd->add_option("--l0", l0, "flat-initialisation depth (-1 = auto)");
    cmd->add_option("--depth", depth, "truncation level override (-1 = auto)");
  }

  PriorOverrides overrides() const {
    PriorOverrides o;
    o.a = a;
    o.kappa = kappa;
    o.schedule = schedule_from_name(schedule);
    o.flat_depth = l0;
    o.depth = depth;
    return o;
  }

  ordered_json echo(const PriorSpec& resolved) const {
    return {{"a", resolved.a},
            {"kappa", resolved.kappa},
            {"schedule", schedule_name(resolved.schedule)},
            {"l0", resolved.flat_depth},
            {"depth", resolved.depth}};
  }
};

std::vector<double> load_sample(const fs::path& input) {
  std::size_t bad_line = 0;
  auto data = read_sample_file(input, &bad_line);
  if (bad_line != 0)
    throw std::invalid_argument("line " + std::to_string(bad_line) +
                                ": value malformed or outside (0,1]");
  if (data.empty()) throw std::invalid_argument("input file holds no data");
  return data;
}

void write_json(const fs::path& path, const ordered_json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

int run_fit(const fs::path& input, const fs::path& out, std::uint64_t seed,
            const PriorFlags& flags) {
  const auto data = load_sample(input);
  const PriorSpec prior = flags.overrides().resolve(std::int64_t(data.size()));
  const PosteriorTree post = PosteriorTree::fit(data, prior);
  fs::create_directories(out);
  write_json(out / "posterior.json", posterior_to_json(post, seed));
  write_density_csv(out / "mean_density.csv", post.mean_density());
  const auto med = post.median_density();
  write_density_csv(out / "median_density.csv", med.hist);
  write_field_support_csv(out / "fhat_support.csv", med.coeffs);
  return 0;
}

int run_band(const fs::path& input, const fs::path& out, std::uint64_t seed,
             const PriorFlags& flags, double gamma, const std::string& un_mode,
             double alpha0, int draws, double envelope_R) {
  const auto data = load_sample(input);
  const auto n = std::int64_t(data.size());
  const PriorSpec prior = flags.overrides().resolve(n);
  const PosteriorTree post = PosteriorTree::fit(data, prior);
  const Centering cn = centering_Cn(data);

  BandSpec spec;
  spec.gamma = gamma;
  spec.alpha0 = alpha0;
  spec.draws = draws;
  spec.u_n = resolve_un(un_mode, n);
  spec.envelope_R = envelope_R;

  const auto med = post.median_density();
  BandResult result;
  result.L_hat = support_depth(med.coeffs);
  result.alpha_hat = alpha_hat(result.L_hat, n, alpha0);
  result.gamma = gamma;
  result.u_n = spec.u_n;
  result.seed = seed;
  result.draws = draws;
  result.Rn = radius_Rn(post, cn, spec, mix64(seed ^ 0xbadc0de1));

  // One pass over fresh draws: acceptance, envelope, and the sup-norm
  // diameter proxy against the alpha_hat-truncated centering.
  const int cut = nonparametric_cutoff(n, result.alpha_hat, spec.envelope_R);
  const HistogramDensity reference = haar_synthesize(
      project_Kj(cn.coeffs, std::min(cut + 1, cn.coeffs.depth())));
  const int grid_depth = cn.coeffs.depth();
  const std::size_t cells = std::size_t{1} << grid_depth;
  std::vector<double> lower(cells, 0.0), upper(cells, 0.0);
  const std::uint64_t draw_seed = mix64(seed ^ 0xbadc0de2);
  for (int s = 0; s < draws; ++s) {
    WaveletField field(0);
    HistogramDensity hist = HistogramDensity::uniform(0);
    if (post.depth() > 0) {
      const auto splits = post.sample_splits(draw_seed, std::uint64_t(s));
      field = field_from_splits(splits);
      hist = histogram_from_splits(splits);
    }
    if (!band_membership(field, cn, result.Rn, result.alpha_hat, spec)) continue;
    const HistogramDensity fine = hist.refined(grid_depth);
    if (result.accepted == 0) {
      lower.assign(fine.heights().begin(), fine.heights().end());
      upper.assign(fine.heights().begin(), fine.heights().end());
    } else {
      for (std::size_t k = 0; k < cells; ++k) {
        lower[k] = std::min(lower[k], fine.heights()[k]);
        upper[k] = std::max(upper[k], fine.heights()[k]);
      }
    }
    ++result.accepted;
    result.diameter_proxy =
        std::max(result.diameter_proxy, 2.0 * sup_norm_distance(hist, reference));
  }

  fs::create_directories(out);
  write_json(out / "band.json", band_result_to_json(result));
  {
    std::ostringstream os;
    os << "x,lower,upper,center\n";
    if (result.accepted > 0) {
      const double width = std::ldexp(1.0, -grid_depth);
      for (std::size_t k = 0; k < cells; ++k)
        os << format_double((double(k) + 0.5) * width) << ','
           << format_double(lower[k]) << ',' << format_double(upper[k]) << ','
           << format_double(reference.heights()[k]) << '\n';
    }
    write_text_file(out / "envelope.csv", os.str());
  }
  if (result.accepted == 0) {
    std::cerr << "degenerate band: no posterior draw inside the credible set\n";
    return 3;
  }
  if (result.accepted < 10)
    std::cerr << "warning: only " << result.accepted
              << " accepted draws; band estimates are unstable\n";
  return 0;
}

int run_simulate(const std::string& mode, const fs::path& out, std::uint64_t seed,
                 int reps, int draws, int threads, std::vector<double> alphas,
                 std::vector<std::int64_t> ns, double c, int l1, double gamma,
                 double alpha0, const std::string& un_mode, double ks_threshold,
                 const PriorFlags& flags) {
  fs::create_directories(out);
  ordered_json summary;
  summary["schema_version"] = 1;
  summary["kind"] = "sspt-simulation";
  summary["mode"] = mode;
  ordered_json config{{"seed", seed},     {"reps", reps},
                      {"draws", draws},   {"threads", threads},
                      {"alphas", alphas}, {"ns", ns},
                      {"c", c},           {"l1", l1},
                      {"gamma", gamma},   {"alpha0", alpha0},
                      {"un", un_mode},    {"ks_threshold", ks_threshold}};

  if (mode == "rates") {
    RateConfig rc;
    rc.alphas = std::move(alphas);
    rc.ns = std::move(ns);
    rc.reps = reps;
    rc.c = c;
    rc.l1 = l1;
    rc.prior = flags.overrides();
    rc.threads = threads;
    const ExperimentReport report = rate_experiment(rc, seed);
    write_report_csv(out / "report.csv", report);
    config["prior"] = flags.echo(rc.prior.resolve(rc.ns.back()));
    summary["config"] = config;
    ordered_json slopes = ordered_json::array();
    for (const auto& r : report.rates) {
      ordered_json entry{{"alpha", r.alpha},
                         {"slope", r.slope},
                         {"minimax_slope", -r.alpha / (2.0 * r.alpha + 1.0)}};
      ordered_json errs = ordered_json::array();
      for (const auto& [n, err] : r.mean_err_by_n)
        errs.push_back({{"n", n}, {"mean_sup_err", err}});
      entry["mean_err_by_n"] = errs;
      slopes.push_back(entry);
    }
    summary["slopes"] = slopes;
  } else if (mode == "coverage") {
    CoverageConfig cc;
    cc.alpha = alphas.front();
    cc.ns = std::move(ns);
    cc.reps = reps;
    cc.c = c;
    cc.l1 = l1;
    cc.gamma = gamma;
    cc.alpha0 = alpha0;
    cc.draws = draws;
    cc.un = un_mode;
    cc.prior = flags.overrides();
    cc.threads = threads;
    const ExperimentReport report = coverage_experiment(cc, seed);
    write_report_csv(out / "report.csv", report);
    config["prior"] = flags.echo(cc.prior.resolve(cc.ns.front()));
    summary["config"] = config;
    ordered_json per_n = ordered_json::array();
    for (const auto& e : report.coverage.per_n)
      per_n.push_back({{"n", e.n},
                       {"coverage", e.coverage},
                       {"mean_credibility", e.mean_credibility},
                       {"mean_diameter_proxy", e.mean_proxy}});
    summary["coverage"] = per_n;
    summary["proxy_slope"] = report.coverage.proxy_slope;
    summary["proxy_intercept"] = report.coverage.proxy_intercept;
  } else {  // bvm
    BvmConfig bc;
    bc.n = ns.front();
    bc.draws = draws;
    bc.ks_threshold = ks_threshold;
    bc.prior = flags.overrides();
    const BvmReport report = bvm_experiment(bc, seed);
    write_bvm_csv(out / "report.csv", report);
    config["prior"] = flags.echo(bc.prior.resolve(bc.n));
    summary["config"] = config;
    summary["pass_fraction"] = report.pass_fraction;
    summary["coordinates"] = report.coords.size();
  }
  write_json(out / "summary.json", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spike-and-slab Polya tree density estimation on (0,1]"};
  app.require_subcommand(1);
  // All options live on the root app so a single flat key=value config file
  // (--config) can set any of them; command-line values take precedence.
  app.set_config("--config", "", "flat key=value config file");

  std::string input, out = "out";
  std::uint64_t seed = 20240801;
  PriorFlags prior;
  app.add_option("--input", input, "newline-separated sample in (0,1]");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "root seed");
  prior.attach(&app);

  double gamma = 0.05, alpha0 = 0.5, envelope_R = 1.0;
  std::string un_mode = "logn";
  int draws = 2000;
  app.add_option("--gamma", gamma, "credibility deficit")
      ->check(CLI::Range(1e-6, 0.999999));
  app.add_option("--un", un_mode, "regularity budget: logn, loglogn, or a number");
  app.add_option("--alpha0", alpha0, "minimal regularity")
      ->check(CLI::Range(1e-6, 1.0));
  app.add_option("--draws", draws, "Monte Carlo draws")->check(CLI::PositiveNumber);
  app.add_option("--c0R", envelope_R, "R in the 4R^2 cutoff constant")
      ->check(CLI::PositiveNumber);

  std::string mode = "rates";
  int reps = 50, threads = 1, l1 = 1;
  double c = 0.3, ks_threshold = 0.1;
  std::vector<double> alphas{0.5, 1.0};
  std::vector<std::int64_t> ns{1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16, 1 << 17};
  app.add_option("--mode", mode, "rates, coverage, or bvm")
      ->check(CLI::IsMember({"rates", "coverage", "bvm"}));
  app.add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--alphas", alphas, "truth regularities")->delimiter(',');
  app.add_option("--ns", ns, "sample sizes")->delimiter(',');
  app.add_option("--c", c, "truth amplitude");
  app.add_option("--l1", l1, "first signal level");
  app.add_option("--ks-threshold", ks_threshold, "BvM pass threshold");

  CLI::App* fit = app.add_subcommand("fit", "exact conjugate posterior fit");
  CLI::App* band = app.add_subcommand("band", "adaptive credible band");
  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo experiment modes");
  for (CLI::App* cmd : {fit, band, sim}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean, bad config exits 2
  }

  try {
    if (alphas.empty() || ns.empty())
      throw std::invalid_argument("empty --alphas or --ns grid");
    if (app.got_subcommand(fit) || app.got_subcommand(band)) {
      if (input.empty()) throw std::invalid_argument("--input is required");
      if (app.got_subcommand(fit)) return run_fit(input, out, seed, prior);
      return run_band(input, out, seed, prior, gamma, un_mode, alpha0, draws,
                      envelope_R);
    }
    return run_simulate(mode, out, seed, reps, draws, threads, alphas, ns, c, l1,
                        gamma, alpha0, un_mode, ks_threshold, prior);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
