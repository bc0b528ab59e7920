#include "clusmat/spanning_tree.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace clusmat {

SpanningTree SpanningTree::from_parents(const BitMatrix& points, std::vector<std::size_t> parent) {
  const std::size_t n = parent.size();
  if (n != points.rows()) throw ContractError("tree must have one vertex per row");

  SpanningTree t;
  std::size_t roots = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] == kNoParent) {
      t.root_ = v;
      ++roots;
    } else if (parent[v] >= n || parent[v] == v) {
      throw ContractError("invalid parent for vertex " + std::to_string(v));
    }
  }
  if (roots != 1) throw ContractError("tree must have exactly one root, found " + std::to_string(roots));

  // Children lists, then a reachability pass from the root rules out cycles.
  t.child_offset_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (v != t.root_) ++t.child_offset_[parent[v] + 1];
  for (std::size_t v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  t.child_list_.resize(n - 1);
  std::vector<std::size_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
  for (std::size_t v = 0; v < n; ++v)
    if (v != t.root_) t.child_list_[fill[parent[v]]++] = v;

  std::vector<std::size_t> stack{t.root_};
  std::size_t reached = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    ++reached;
    for (std::size_t c = t.child_offset_[v]; c < t.child_offset_[v + 1]; ++c) stack.push_back(t.child_list_[c]);
  }
  if (reached != n) throw ContractError("parent links contain a cycle");

  t.edge_cost_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (v == t.root_) continue;
    t.edge_cost_[v] = hamming(points.row(v), points.row(parent[v]));
    t.ham_cost_ += t.edge_cost_[v];
  }
  t.parent_ = std::move(parent);
  return t;
}

SpanningTree build_cluster_spanning_tree(const BitMatrix& points, const Clustering& clustering) {
  const std::size_t n = points.rows();
  if (clustering.assignment.size() != n || clustering.centers.empty()) {
    throw ContractError("clustering does not match the point set");
  }
  std::vector<std::size_t> parent(n, kNoParent);
  for (std::size_t c = 0; c < clustering.k(); ++c) {
    const std::size_t v = clustering.centers[c];
    if (v >= n || clustering.assignment[v] != c) throw ContractError("center is not an input point of its cluster");
    if (c > 0) parent[v] = clustering.centers[c - 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t label = clustering.assignment[v];
    if (label >= clustering.k()) throw ContractError("assignment label out of range");
    if (clustering.centers[label] != v) parent[v] = clustering.centers[label];
  }
  return SpanningTree::from_parents(points, std::move(parent));
}

Traversal traverse(const BitMatrix& points, const SpanningTree& tree) {
  const std::size_t n = tree.size();
  if (points.rows() != n) throw ContractError("tree does not span the rows of the matrix");

  Traversal out;
  std::vector<std::uint32_t> parent_label(n);
  for (std::size_t v = 0; v < n; ++v)
    parent_label[v] = static_cast<std::uint32_t>(v == tree.root() ? v : tree.parent(v));
  out.diff = IndexSets::differences(points, points, parent_label);

  // Full Euler tour, iteratively: (vertex, next child position).
  std::vector<std::size_t> tour;
  std::vector<char> first_visit;
  tour.reserve(2 * n);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{tree.root(), 0}};
  tour.push_back(tree.root());
  first_visit.push_back(1);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto kids = tree.children(v);
    if (next < kids.size()) {
      const std::size_t c = kids[next++];
      stack.emplace_back(c, 0);
      tour.push_back(c);
      first_visit.push_back(1);
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        tour.push_back(stack.back().first);
        first_visit.push_back(0);
      }
    }
  }
  std::size_t keep = tour.size();
  while (keep > 1 && !first_visit[keep - 1]) --keep;
  tour.resize(keep);

  out.order = std::move(tour);
  out.steps.reserve(out.order.size() - 1);
  for (std::size_t t = 0; t + 1 < out.order.size(); ++t) {
    const std::size_t from = out.order[t];
    const std::size_t to = out.order[t + 1];
    out.steps.push_back({from, to, tree.parent(to) == from ? to : from, !first_visit[t + 1]});
  }
  return out;
}

std::vector<std::size_t> read_parents(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw ParseError("tree file: expected vertex count");
  std::vector<std::size_t> parent(static_cast<std::size_t>(n));
  for (auto& p : parent) {
    long long v = 0;
    if (!(in >> v)) throw ParseError("tree file: truncated parent list");
    if (v < -1 || v >= n) throw ParseError("tree file: parent index out of range");
    p = v < 0 ? kNoParent : static_cast<std::size_t>(v);
  }
  return parent;
}

void write_parents(std::ostream& out, std::span<const std::size_t> parent) {
  out << parent.size() << '\n';
  for (const std::size_t p : parent) {
    if (p == kNoParent) {
      out << "-1\n";
    } else {
      out << p << '\n';
    }
  }
}

}  // namespace clusmat
