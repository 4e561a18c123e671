#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sspt {

/// Address of a node in the binary dyadic tree. The node (l, k) owns the
/// half-open interval (k 2^-l, (k+1) 2^-l]; its children are (l+1, 2k) and
/// (l+1, 2k+1). The binary word of the node is the base-2 expansion of k
/// padded to l bits.
struct NodeIndex {
  int level = 0;
  std::int64_t position = 0;

  NodeIndex() = default;
  NodeIndex(int l, std::int64_t k) : level(l), position(k) {
    if (l < 0 || k < 0 || k >= (std::int64_t{1} << l))
      throw std::invalid_argument("NodeIndex: position out of range for level");
  }

  NodeIndex child0() const { return NodeIndex(level + 1, 2 * position); }
  NodeIndex child1() const { return NodeIndex(level + 1, 2 * position + 1); }
  NodeIndex parent() const {
    if (level == 0) throw std::invalid_argument("NodeIndex: root has no parent");
    return NodeIndex(level - 1, position / 2);
  }

  /// i-th bit of the binary word, i in [0, level): 0 = left turn, 1 = right.
  int bit(int i) const { return int((position >> (level - 1 - i)) & 1); }

  bool operator==(const NodeIndex&) const = default;
};

/// Interval (k 2^-l, (k+1) 2^-l] of a node, exact in binary floating point
/// for levels up to 52.
std::pair<double, double> interval_of(NodeIndex node);

/// Flat per-level storage for one scalar per tree node, levels 0..depth
/// inclusive (level l holds 2^l entries). Immutable use after construction
/// is safe to share across threads.
template <typename T>
class DyadicTree {
 public:
  explicit DyadicTree(int depth, T init = T{}) : depth_(depth) {
    if (depth < 0) throw std::invalid_argument("DyadicTree: negative depth");
    levels_.reserve(std::size_t(depth) + 1);
    for (int l = 0; l <= depth; ++l)
      levels_.emplace_back(std::size_t{1} << l, init);
  }

  int depth() const { return depth_; }

  T& at(int l, std::int64_t k) { return levels_[std::size_t(l)][std::size_t(k)]; }
  const T& at(int l, std::int64_t k) const {
    return levels_[std::size_t(l)][std::size_t(k)];
  }

  std::span<T> level(int l) { return levels_[std::size_t(l)]; }
  std::span<const T> level(int l) const { return levels_[std::size_t(l)]; }

 private:
  int depth_;
  std::vector<std::vector<T>> levels_;
};

/// Per-node data counts N(I_eps) down to a fixed resolution. The root count
/// equals the sample size and every internal count is the sum of its two
/// children.
struct CountTree {
  DyadicTree<std::int64_t> counts;
  std::int64_t total = 0;

  explicit CountTree(int depth) : counts(depth) {}

  int depth() const { return counts.depth(); }
  std::int64_t count(int l, std::int64_t k) const { return counts.at(l, k); }
};

/// Largest L with 2^L L^2 <= n, capped at floor(log2 n). The depth at which
/// posterior histograms are resolved for a sample of size n.
int truncation_level(std::int64_t n);

/// Bin data into the 2^depth leaf intervals under the half-open convention
/// (k 2^-L, (k+1) 2^-L], then sweep counts bottom-up. Throws if any point
/// falls outside (0, 1]; nothing is clamped.
CountTree count_data(std::span<const double> data, int depth);

}  // namespace sspt
