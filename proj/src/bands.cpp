#include "sspt/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sspt/special.hpp"

namespace sspt {

namespace {

WaveletField posterior_draw_field(const PosteriorTree& post, std::uint64_t seed,
                                  std::uint64_t draw) {
  if (post.depth() == 0) return WaveletField(0);
  return field_from_splits(post.sample_splits(seed, draw));
}

// Haar coefficient of f0 at an arbitrary node, via exact node masses.
double coeff_of(const HistogramDensity& f0, NodeIndex node) {
  return std::exp2(0.5 * node.level) *
         (f0.node_mass(node.child1()) - f0.node_mass(node.child0()));
}

}  // namespace

WaveletField empirical_coeffs(std::span<const double> data, int max_level) {
  if (data.empty()) throw std::invalid_argument("empirical_coeffs: no data");
  if (max_level < 0)
    throw std::invalid_argument("empirical_coeffs: negative level");
  // Counts at depth max_level+1 give the left/right-half tallies of every
  // retained node exactly.
  const CountTree counts = count_data(data, max_level + 1);
  const double inv_n = 1.0 / double(data.size());
  WaveletField out(max_level + 1);
  for (int l = 0; l <= max_level; ++l) {
    const double scale = std::exp2(0.5 * l);
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const auto c0 = counts.count(l + 1, 2 * k);
      const auto c1 = counts.count(l + 1, 2 * k + 1);
      out.set(l, k, scale * double(c1 - c0) * inv_n);
    }
  }
  return out;
}

Centering centering_Cn(std::span<const double> data) {
  const auto n = std::int64_t(data.size());
  const int L = truncation_level(n);
  Centering c;
  c.kind = CenteringKind::kCn;
  c.coeffs = empirical_coeffs(data, L);
  c.cutoff = L;
  c.trunc_level = L;
  c.n = n;
  return c;
}

int nonparametric_cutoff(std::int64_t n, double alpha, double R) {
  if (n < 2) throw std::invalid_argument("nonparametric_cutoff: n must be >= 2");
  if (!(alpha > 0.0) || alpha > 1.0 || !(R > 0.0))
    throw std::invalid_argument("nonparametric_cutoff: bad parameters");
  const double v =
      4.0 * R * R * std::pow(double(n) / std::log(double(n)), 1.0 / (1.0 + 2.0 * alpha));
  int cut = int(std::floor(std::log2(v)));
  return std::clamp(cut, 1, truncation_level(n));
}

Centering centering_Tn(std::span<const double> data, double alpha, double R) {
  const auto n = std::int64_t(data.size());
  const int L = truncation_level(n);
  const int cut = nonparametric_cutoff(n, alpha, R);
  Centering c;
  c.kind = CenteringKind::kTn;
  c.coeffs = empirical_coeffs(data, cut);
  c.cutoff = cut;
  c.trunc_level = L;
  c.n = n;
  return c;
}

int support_depth(const WaveletField& fhat) {
  for (int l = fhat.depth() - 1; l >= 0; --l)
    for (double v : fhat.level(l))
      if (v != 0.0) return l;
  return 0;
}

double alpha_hat(int L_hat, std::int64_t n, double alpha0) {
  if (n < 3) throw std::invalid_argument("alpha_hat: n must be >= 3");
  if (!(alpha0 > 0.0) || alpha0 > 1.0)
    throw std::invalid_argument("alpha_hat: alpha0 outside (0,1]");
  if (L_hat <= 0) return 1.0;  // empty-support sentinel: maximal smoothness
  const double raw =
      0.5 * (std::log2(double(n) / std::log(double(n))) / double(L_hat) - 1.0);
  return std::clamp(raw, alpha0, 1.0);
}

double radius_Rn(const PosteriorTree& post, const Centering& center,
                 const BandSpec& spec, std::uint64_t seed) {
  if (spec.draws < 100) throw std::invalid_argument("radius_Rn: need >= 100 draws");
  if (!(spec.gamma > 0.0) || !(spec.gamma < 1.0))
    throw std::invalid_argument("radius_Rn: gamma outside (0,1)");
  const double sqrt_n = std::sqrt(double(post.total()));
  std::vector<double> norms(std::size_t(spec.draws));
  for (int s = 0; s < spec.draws; ++s) {
    const WaveletField f = posterior_draw_field(post, seed, std::uint64_t(s));
    norms[std::size_t(s)] = sqrt_n * multiscale_norm(f - center.coeffs, spec.w);
  }
  std::sort(norms.begin(), norms.end());
  // Upper generalized quantile: smallest order statistic with rank at least
  // ceil((1-gamma) S).
  auto rank = std::int64_t(std::ceil((1.0 - spec.gamma) * spec.draws));
  rank = std::clamp<std::int64_t>(rank, 1, spec.draws);
  return norms[std::size_t(rank - 1)];
}

bool band_membership(const WaveletField& f0, const Centering& center,
                     double Rn, double alpha_hat_value, const BandSpec& spec,
                     const HolderEnvelope* envelope) {
  double ball_norm = multiscale_norm(f0 - center.coeffs, spec.w);
  double reg_norm = beta_L_norm(f0, alpha_hat_value, center.trunc_level, spec.alpha0);
  if (envelope != nullptr) {
    if (envelope->alpha < spec.alpha0)
      throw std::invalid_argument("band_membership: envelope below alpha0");
    // Tail of the multiscale norm: R 2^{-l(alpha+1/2)} / w_l is decreasing,
    // so the first uncovered level dominates.
    const int tail = f0.depth();
    ball_norm = std::max(
        ball_norm, envelope->R * std::exp2(-tail * (envelope->alpha + 0.5)) /
                       spec.w(tail));
    // Tail of the regularity norm: R 2^{l(H-alpha)} is monotone within each
    // regime of H, so the candidate levels are the regime endpoints.
    const double dL = double(center.trunc_level) / spec.alpha0;
    const int switch_level = int(std::floor(dL));
    for (int l : {tail, std::max(switch_level, tail), std::max(switch_level + 1, tail)}) {
      const double H = l <= dL ? alpha_hat_value : spec.alpha0;
      reg_norm = std::max(
          reg_norm, envelope->R * std::exp2(l * (H - envelope->alpha)));
    }
  }
  const double radius = Rn / std::sqrt(double(center.n));
  return ball_norm <= radius && reg_norm <= spec.u_n;
}

bool band_membership(const HistogramDensity& f0, const Centering& center,
                     double Rn, double alpha_hat_value, const BandSpec& spec,
                     const HolderEnvelope* envelope) {
  return band_membership(haar_analyze(f0), center, Rn, alpha_hat_value, spec,
                         envelope);
}

DiameterProxy band_diameter_proxy(const PosteriorTree& post,
                                  const Centering& center, double Rn,
                                  double alpha_hat_value, const BandSpec& spec,
                                  std::uint64_t seed) {
  // The sup-norm reference is the centering truncated at the cutoff implied
  // by alpha_hat; membership itself keeps the untruncated centering.
  const int cut = nonparametric_cutoff(center.n, alpha_hat_value, spec.envelope_R);
  const HistogramDensity reference =
      haar_synthesize(project_Kj(center.coeffs, std::min(cut + 1, center.coeffs.depth())));
  DiameterProxy proxy;
  proxy.draws = spec.draws;
  for (int s = 0; s < spec.draws; ++s) {
    WaveletField field(0);
    HistogramDensity hist = HistogramDensity::uniform(0);
    if (post.depth() > 0) {
      const DyadicTree<double> splits = post.sample_splits(seed, std::uint64_t(s));
      field = field_from_splits(splits);
      hist = histogram_from_splits(splits);
    }
    if (!band_membership(field, center, Rn, alpha_hat_value, spec)) continue;
    ++proxy.accepted;
    proxy.value = std::max(proxy.value, 2.0 * sup_norm_distance(hist, reference));
  }
  return proxy;
}

std::vector<std::vector<double>> white_bridge_covariance(
    const HistogramDensity& f0, std::span<const NodeIndex> nodes) {
  const std::size_t m = nodes.size();
  std::vector<double> mean(m);
  for (std::size_t i = 0; i < m; ++i) mean[i] = coeff_of(f0, nodes[i]);

  auto raw_inner = [&](NodeIndex a, NodeIndex b) -> double {
    if (a.level == b.level)
      return a.position == b.position
                 ? std::exp2(a.level) * f0.node_mass(a)
                 : 0.0;
    if (a.level > b.level) std::swap(a, b);  // a shallow, b deep
    const int gap = b.level - a.level;
    if ((b.position >> gap) != a.position) return 0.0;  // disjoint supports
    // psi_a is constant on I_b: sign from which half of I_a contains it.
    const int half_bit = int((b.position >> (gap - 1)) & 1);
    const double value = (half_bit == 1 ? 1.0 : -1.0) * std::exp2(0.5 * a.level);
    return value * coeff_of(f0, b);
  };

  std::vector<std::vector<double>> cov(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double v = raw_inner(nodes[i], nodes[j]) - mean[i] * mean[j];
      cov[i][j] = v;
      cov[j][i] = v;
    }
  return cov;
}

double ks_distance_normal(std::vector<double> samples, double sigma) {
  if (samples.empty()) throw std::invalid_argument("ks_distance_normal: no samples");
  if (!(sigma > 0.0)) return 1.0;  // degenerate limit law
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = normal_cdf(samples[i] / sigma);
    d = std::max(d, std::fabs(double(i + 1) / n - cdf));
    d = std::max(d, std::fabs(cdf - double(i) / n));
  }
  return d;
}

BvmReport bvm_diagnostic(const PosteriorTree& post, const Centering& center,
                         const HistogramDensity& f0, int max_level, int draws,
                         double ks_threshold, std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("bvm_diagnostic: need draws >= 2");
  const int top = std::min(max_level, post.depth() - 1);
  std::vector<NodeIndex> nodes;
  for (int l = 0; l <= top; ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
      nodes.emplace_back(l, k);

  const double sqrt_n = std::sqrt(double(post.total()));
  std::vector<std::vector<double>> series(nodes.size(),
                                          std::vector<double>(std::size_t(draws)));
  for (int s = 0; s < draws; ++s) {
    const WaveletField f = posterior_draw_field(post, seed, std::uint64_t(s));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      series[i][std::size_t(s)] =
          sqrt_n * (f.at(nd.level, nd.position) -
                    center.coeffs.at(nd.level, nd.position));
    }
  }

  BvmReport report;
  int passed = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double var =
        white_bridge_covariance(f0, std::span(&nodes[i], 1))[0][0];
    BvmCoordinate c;
    c.level = nodes[i].level;
    c.position = nodes[i].position;
    c.variance = var;
    c.ks = ks_distance_normal(series[i], std::sqrt(std::max(var, 0.0)));
    c.pass = c.ks <= ks_threshold;
    passed += c.pass ? 1 : 0;
    report.coords.push_back(c);
  }
  report.pass_fraction =
      report.coords.empty() ? 1.0 : double(passed) / double(report.coords.size());
  return report;
}

}  // namespace sspt
