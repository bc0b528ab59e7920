#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "clusmat/bitmatrix.hpp"
#include "clusmat/clustering.hpp"
#include "clusmat/entry_query.hpp"

namespace clusmat {

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

/// Rooted spanning tree over the rows of a point matrix, stored as parent
/// links. The edge into vertex v is (parent(v), v) and is identified by v.
class SpanningTree {
 public:
  /// Validates that `parent` describes a single tree (exactly one root, no
  /// cycles) and records the Hamming cost of every edge.
  static SpanningTree from_parents(const BitMatrix& points, std::vector<std::size_t> parent);

  std::size_t size() const { return parent_.size(); }
  std::size_t root() const { return root_; }
  std::size_t parent(std::size_t v) const { return parent_[v]; }
  std::span<const std::size_t> parents() const { return parent_; }
  std::span<const std::size_t> children(std::size_t v) const {
    return std::span<const std::size_t>(child_list_).subspan(child_offset_[v], child_offset_[v + 1] - child_offset_[v]);
  }
  /// ham(row_parent(v), row_v); zero for the root.
  std::size_t edge_cost(std::size_t v) const { return edge_cost_[v]; }
  /// Sum of edge costs.
  std::size_t ham_cost() const { return ham_cost_; }

 private:
  SpanningTree() = default;

  std::size_t root_ = 0;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> child_offset_;
  std::vector<std::size_t> child_list_;
  std::vector<std::size_t> edge_cost_;
  std::size_t ham_cost_ = 0;
};

/// Star-plus-path tree of a clustering whose centers are input points: every
/// non-center hangs off its center, centers are chained in creation order and
/// the first center is the root.
SpanningTree build_cluster_spanning_tree(const BitMatrix& points, const Clustering& clustering);

/// Walk U through a tree with per-edge difference sets.
struct Traversal {
  struct Step {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t edge = 0;  // child endpoint
    bool revisit = false;  // `to` was already visited earlier in U
  };

  std::vector<std::size_t> order;  // U
  std::vector<Step> steps;         // order[t] -> order[t + 1]
  IndexSets diff;                  // diff[v]: coordinates where row v and row parent(v) differ
};

/// Depth-first Euler tour from the root, without the returns that follow the
/// last newly visited vertex, so |U| <= 2n - 1.
Traversal traverse(const BitMatrix& points, const SpanningTree& tree);

/// Parent list as text: first line n, then one line per vertex holding the
/// parent index or -1 for the root.
std::vector<std::size_t> read_parents(std::istream& in);
void write_parents(std::ostream& out, std::span<const std::size_t> parent);

}  // namespace clusmat
