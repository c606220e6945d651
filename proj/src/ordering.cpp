#include "biot/ordering.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace biot {

std::string_view ordering_name(OrderingMethod m) {
  switch (m) {
    case OrderingMethod::automatic: return "automatic";
    case OrderingMethod::amd: return "amd";
    case OrderingMethod::nested_dissection: return "nested-dissection";
    case OrderingMethod::natural: return "natural";
  }
  return "?";
}

namespace {

std::vector<int> amd_of(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> pattern(n, n);
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(edges.size() + n);
  // the minimum degree code misbehaves on columns without a diagonal
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
  for (const auto& [i, j] : edges) trip.emplace_back(i, j, 1.0);
  pattern.setFromTriplets(trip.begin(), trip.end());
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int> amd;
  amd(pattern, perm);
  return {perm.indices().data(), perm.indices().data() + n};
}

struct Graph {
  std::vector<int> ptr, adj;
  std::vector<int> dense;  // nodes left out of the graph
};

Graph adjacency(const CsrMatrix& k) {
  const int n = static_cast<int>(k.rows());
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  const int dense_limit = std::max(16, static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))));
  std::vector<char> is_dense(n, 0);
  Graph g;
  for (int i = 0; i < n; ++i)
    if (rp[i + 1] - rp[i] > dense_limit) {
      is_dense[i] = 1;
      g.dense.push_back(i);
    }
  g.ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    if (!is_dense[i])
      for (int p = rp[i]; p < rp[i + 1]; ++p)
        if (ci[p] != i && !is_dense[ci[p]]) g.adj.push_back(ci[p]);
    g.ptr[i + 1] = static_cast<int>(g.adj.size());
  }
  return g;
}

class Dissector {
 public:
  Dissector(const Graph& g, int leaf)
      : g_(g), leaf_(leaf), tag_(g.ptr.size() - 1, -1), level_(g.ptr.size() - 1, -1), local_(g.ptr.size() - 1, -1) {}

  void run(std::vector<int>& nodes, std::vector<int>& out) {
    const int id = next_id_++;
    for (int v : nodes) tag_[v] = id;
    split(nodes, id, out);
  }

 private:
  const Graph& g_;
  int leaf_;
  std::vector<int> tag_, level_, local_;
  int next_id_ = 0;

  // BFS from `start` inside subset `id`; returns visit order, fills level_.
  std::vector<int> bfs(int start, int id) {
    std::vector<int> queue{start};
    level_[start] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int v = queue[h];
      for (int p = g_.ptr[v]; p < g_.ptr[v + 1]; ++p) {
        const int w = g_.adj[p];
        if (tag_[w] == id && level_[w] < 0) {
          level_[w] = level_[v] + 1;
          queue.push_back(w);
        }
      }
    }
    return queue;
  }

  void clear_levels(const std::vector<int>& nodes) {
    for (int v : nodes) level_[v] = -1;
  }

  void leaf(const std::vector<int>& nodes, std::vector<int>& out) {
    const int n = static_cast<int>(nodes.size());
    if (n <= 2) {
      out.insert(out.end(), nodes.begin(), nodes.end());
      return;
    }
    for (int i = 0; i < n; ++i) local_[nodes[i]] = i;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int p = g_.ptr[nodes[i]]; p < g_.ptr[nodes[i] + 1]; ++p) {
        const int j = local_[g_.adj[p]];
        if (j >= 0) edges.emplace_back(i, j);
      }
    for (int v : nodes) local_[v] = -1;
    for (int i : amd_of(n, edges)) out.push_back(nodes[i]);
  }

  void split(std::vector<int>& nodes, int id, std::vector<int>& out) {
    if (static_cast<int>(nodes.size()) <= leaf_) {
      leaf(nodes, out);
      return;
    }
    // pseudo-peripheral start
    int start = nodes.front();
    std::vector<int> order;
    int depth = -1;
    for (int pass = 0; pass < 3; ++pass) {
      order = bfs(start, id);
      const int far = order.back();
      const int d = level_[far];
      if (d <= depth) break;
      depth = d;
      if (pass < 2) {
        clear_levels(order);
        start = far;
      }
    }
    if (level_[order.back()] < 0) order = bfs(start, id);

    if (order.size() < nodes.size()) {
      // disconnected: peel off the reached component
      std::vector<int> rest;
      for (int v : nodes)
        if (level_[v] < 0) rest.push_back(v);
      clear_levels(order);
      recurse(order, out);
      recurse(rest, out);
      return;
    }
    const int max_level = level_[order.back()];
    std::vector<int> count(max_level + 2, 0);
    for (int v : order) ++count[level_[v]];
    int mid = 0;
    for (int acc = 0; mid <= max_level; ++mid) {
      acc += count[mid];
      if (2 * acc >= static_cast<int>(nodes.size())) break;
    }
    if (mid == 0 || mid >= max_level) {
      clear_levels(order);
      leaf(nodes, out);
      return;
    }
    std::vector<int> a, b, sep;
    for (int v : order) {
      const int l = level_[v];
      if (l < mid) {
        a.push_back(v);
      } else if (l > mid) {
        b.push_back(v);
      } else {
        bool touches = false;
        for (int p = g_.ptr[v]; p < g_.ptr[v + 1] && !touches; ++p)
          touches = tag_[g_.adj[p]] == id && level_[g_.adj[p]] == mid + 1;
        (touches ? sep : a).push_back(v);
      }
    }
    clear_levels(order);
    for (int v : sep) tag_[v] = -2;
    recurse(a, out);
    recurse(b, out);
    out.insert(out.end(), sep.begin(), sep.end());
  }

  void recurse(std::vector<int>& nodes, std::vector<int>& out) {
    if (nodes.empty()) return;
    const int id = next_id_++;
    for (int v : nodes) tag_[v] = id;
    split(nodes, id, out);
  }
};

}  // namespace

std::vector<int> amd_ordering(const CsrMatrix& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("amd_ordering: matrix must be square");
  const int n = static_cast<int>(k.rows());
  std::vector<std::pair<int, int>> edges;
  edges.reserve(k.nnz());
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  for (int i = 0; i < n; ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p) edges.emplace_back(i, ci[p]);
  return amd_of(n, edges);
}

std::vector<int> nested_dissection_ordering(const CsrMatrix& k, int leaf_size) {
  if (k.rows() != k.cols()) throw std::invalid_argument("nested_dissection_ordering: matrix must be square");
  const Graph g = adjacency(k);
  const int n = static_cast<int>(k.rows());
  std::vector<char> dense(n, 0);
  for (int d : g.dense) dense[d] = 1;
  std::vector<int> nodes;
  for (int i = 0; i < n; ++i)
    if (!dense[i]) nodes.push_back(i);
  std::vector<int> out;
  out.reserve(n);
  Dissector(g, std::max(leaf_size, 4)).run(nodes, out);
  out.insert(out.end(), g.dense.begin(), g.dense.end());
  return out;
}

std::size_t cholesky_fill(const CsrMatrix& k, std::span<const int> order) {
  const int n = static_cast<int>(k.rows());
  if (order.size() != k.rows()) throw std::invalid_argument("cholesky_fill: order has wrong length");
  std::vector<int> pinv(n);
  for (int i = 0; i < n; ++i) pinv[order[i]] = i;
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  std::vector<int> parent(n, -1), flag(n, -1);
  std::size_t fill = 0;
  for (int kk = 0; kk < n; ++kk) {
    flag[kk] = kk;
    const int old = order[kk];
    for (int p = rp[old]; p < rp[old + 1]; ++p) {
      for (int i = pinv[ci[p]]; i < kk && flag[i] != kk; i = parent[i]) {
        if (parent[i] == -1) parent[i] = kk;
        ++fill;
        flag[i] = kk;
      }
    }
  }
  return fill;
}

std::vector<int> fill_reducing_ordering(const CsrMatrix& k, OrderingMethod method) {
  switch (method) {
    case OrderingMethod::amd: return amd_ordering(k);
    case OrderingMethod::nested_dissection: return nested_dissection_ordering(k);
    case OrderingMethod::natural: {
      std::vector<int> o(k.rows());
      std::iota(o.begin(), o.end(), 0);
      return o;
    }
    case OrderingMethod::automatic: break;
  }
  std::vector<int> a = amd_ordering(k);
  if (k.rows() < 2000) return a;
  std::vector<int> nd = nested_dissection_ordering(k);
  return cholesky_fill(k, nd) < cholesky_fill(k, a) ? nd : a;
}

}  // namespace biot
