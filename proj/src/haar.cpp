#include "sspt/haar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sspt {

HistogramDensity::HistogramDensity(int depth, std::vector<double> heights)
    : depth_(depth), heights_(std::move(heights)) {
  if (depth < 0) throw std::invalid_argument("HistogramDensity: negative depth");
  if (heights_.size() != (std::size_t{1} << depth))
    throw std::invalid_argument("HistogramDensity: 2^depth heights required");
  simplex_ = std::all_of(heights_.begin(), heights_.end(),
                         [](double h) { return h >= 0.0; });
}

HistogramDensity HistogramDensity::uniform(int depth) {
  return HistogramDensity(depth,
                          std::vector<double>(std::size_t{1} << depth, 1.0));
}

double HistogramDensity::value_at(double x) const {
  if (!(x > 0.0) || !(x <= 1.0))
    throw std::invalid_argument("value_at: x outside (0,1]");
  const auto k = std::int64_t(std::ceil(std::ldexp(x, depth_))) - 1;
  return heights_[std::size_t(k)];
}

double HistogramDensity::integral() const {
  double sum = 0.0, comp = 0.0;
  for (double h : heights_) {  // Kahan
    const double y = h - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::ldexp(sum, -depth_);
}

double HistogramDensity::min_height() const {
  return *std::min_element(heights_.begin(), heights_.end());
}

double HistogramDensity::max_height() const {
  return *std::max_element(heights_.begin(), heights_.end());
}

double HistogramDensity::node_mass(NodeIndex node) const {
  if (node.level <= depth_) {
    const int shift = depth_ - node.level;
    double m = 0.0;
    const auto lo = node.position << shift;
    const auto hi = (node.position + 1) << shift;
    for (auto k = lo; k < hi; ++k) m += heights_[std::size_t(k)];
    return std::ldexp(m, -depth_);
  }
  // Below the leaf resolution the density is constant, so the mass is
  // height * interval length.
  const auto leaf = node.position >> (node.level - depth_);
  return std::ldexp(heights_[std::size_t(leaf)], -node.level);
}

HistogramDensity HistogramDensity::refined(int new_depth) const {
  if (new_depth < depth_)
    throw std::invalid_argument("refined: target depth coarser than source");
  const int reps = 1 << (new_depth - depth_);
  std::vector<double> h;
  h.reserve(std::size_t{1} << new_depth);
  for (double v : heights_)
    for (int r = 0; r < reps; ++r) h.push_back(v);
  return HistogramDensity(new_depth, std::move(h));
}

WaveletField::WaveletField(int depth) : depth_(depth) {
  if (depth < 0) throw std::invalid_argument("WaveletField: negative depth");
  levels_.reserve(std::size_t(depth));
  for (int l = 0; l < depth; ++l)
    levels_.emplace_back(std::size_t{1} << l, 0.0);
}

WaveletField operator-(const WaveletField& a, const WaveletField& b) {
  WaveletField out(std::max(a.depth(), b.depth()));
  for (int l = 0; l < out.depth(); ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const double av = l < a.depth() ? a.at(l, k) : 0.0;
      const double bv = l < b.depth() ? b.at(l, k) : 0.0;
      out.set(l, k, av - bv);
    }
  return out;
}

WeightSequence WeightSequence::admissible_default() {
  return WeightSequence([](int l) {
    const double v = std::max(l, 2);
    return std::sqrt(v) * std::log(v);
  });
}

bool WeightSequence::is_admissible(int max_level) const {
  double prev_ratio = 0.0;
  for (int l = 0; l <= max_level; ++l) {
    const double w = fn_(l);
    if (!(w > 0.0)) return false;
    if (l >= 2) {
      const double ratio = w / std::sqrt(double(l));
      if (ratio < prev_ratio * (1.0 - 1e-12)) return false;
      prev_ratio = ratio;
    }
  }
  return true;
}

WaveletField haar_analyze(const HistogramDensity& f) {
  const int L = f.depth();
  WaveletField out(L);
  // Leaf masses, then a bottom-up sweep computing each parent mass and the
  // coefficient 2^{l/2}(m - 2 m0) on the way up.
  std::vector<double> mass(f.heights().begin(), f.heights().end());
  for (auto& m : mass) m = std::ldexp(m, -L);
  for (int l = L - 1; l >= 0; --l) {
    const std::size_t width = std::size_t{1} << l;
    const double scale = std::exp2(0.5 * l);
    for (std::size_t k = 0; k < width; ++k) {
      const double m0 = mass[2 * k];
      const double m1 = mass[2 * k + 1];
      out.set(l, std::int64_t(k), scale * (m1 - m0));
      mass[k] = m0 + m1;
    }
    mass.resize(width);
  }
  return out;
}

HistogramDensity haar_synthesize(const WaveletField& w) {
  const int L = w.depth();
  std::vector<double> mass{1.0};  // <f, phi> = 1
  for (int l = 0; l < L; ++l) {
    const std::size_t width = std::size_t{1} << l;
    const double scale = std::exp2(-0.5 * l);
    std::vector<double> next(2 * width);
    for (std::size_t k = 0; k < width; ++k) {
      const double m = mass[k];
      const double c = w.at(l, std::int64_t(k)) * scale;
      next[2 * k] = 0.5 * (m - c);
      next[2 * k + 1] = 0.5 * (m + c);
    }
    mass.swap(next);
  }
  for (auto& m : mass) m = std::ldexp(m, L);
  return HistogramDensity(L, std::move(mass));
}

double coeff_from_tree(double p_parent, double y, int level) {
  return std::exp2(0.5 * level) * p_parent * (1.0 - 2.0 * y);
}

WaveletField project_Kj(const WaveletField& w, int j) {
  if (j < 0 || j > w.depth())
    throw std::invalid_argument("project_Kj: level out of range");
  WaveletField out(w.depth());
  for (int l = 0; l < j; ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
      out.set(l, k, w.at(l, k));
  return out;
}

double sup_norm_distance(const HistogramDensity& f, const HistogramDensity& g) {
  const int d = std::max(f.depth(), g.depth());
  const HistogramDensity fr = f.depth() == d ? f : f.refined(d);
  const HistogramDensity gr = g.depth() == d ? g : g.refined(d);
  double m = 0.0;
  for (std::size_t k = 0; k < fr.heights().size(); ++k)
    m = std::max(m, std::fabs(fr.heights()[k] - gr.heights()[k]));
  return m;
}

double multiscale_norm(const WaveletField& x, const WeightSequence& w) {
  double norm = 0.0;
  for (int l = 0; l < x.depth(); ++l) {
    double lvl = 0.0;
    for (double v : x.level(l)) lvl = std::max(lvl, std::fabs(v));
    norm = std::max(norm, lvl / w(l));
  }
  return norm;
}

double beta_L_norm(const WaveletField& g, double beta, int L, double alpha0) {
  if (!(beta > 0.0) || !(alpha0 > 0.0) || alpha0 > 1.0 || L < 1)
    throw std::invalid_argument("beta_L_norm: bad parameters");
  const double dL = double(L) / alpha0;
  double norm = 0.0;
  for (int l = 0; l < g.depth(); ++l) {
    const double H = l <= dL ? beta : alpha0;
    const double scale = std::exp2(l * (H + 0.5));
    double lvl = 0.0;
    for (double v : g.level(l)) lvl = std::max(lvl, std::fabs(v));
    norm = std::max(norm, scale * lvl);
  }
  return norm;
}

bool holder_ball_check(const WaveletField& g, double alpha, double R) {
  if (!(alpha > 0.0) || alpha > 1.0 || !(R > 0.0))
    throw std::invalid_argument("holder_ball_check: bad parameters");
  for (int l = 0; l < g.depth(); ++l) {
    const double bound = R * std::exp2(-l * (alpha + 0.5));
    for (double v : g.level(l))
      if (std::fabs(v) > bound) return false;
  }
  return true;
}

bool self_similarity_check(const HistogramDensity& f, double alpha, double eps,
                           int j0) {
  if (j0 < 1) throw std::invalid_argument("self_similarity_check: j0 >= 1");
  if (j0 > f.depth() - 1) return false;  // nothing checkable at this depth
  const WaveletField coeffs = haar_analyze(f);
  for (int j = j0; j <= f.depth() - 1; ++j) {
    const HistogramDensity proj = haar_synthesize(project_Kj(coeffs, j));
    if (sup_norm_distance(proj, f) < eps * std::exp2(-j * alpha)) return false;
  }
  return true;
}

}  // namespace sspt
