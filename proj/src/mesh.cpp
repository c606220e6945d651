#include "biot/mesh.hpp"

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace biot {

Mesh Mesh::unit_square(int n_div) {
  if (n_div < 1) throw std::invalid_argument("mesh: n_div must be >= 1, got " + std::to_string(n_div));

  Mesh m;
  m.n_div_ = n_div;
  const int n = n_div;
  const int stride = n + 1;

  m.vertices_.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  m.cells_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * stride + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + stride;
      const int v11 = v01 + 1;
      m.cells_.push_back({v00, v10, v11});
      m.cells_.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  std::vector<int> edge_cell_count;
  m.cell_edges_.resize(m.cells_.size());
  m.cell_edge_signs_.resize(m.cells_.size());
  for (std::size_t c = 0; c < m.cells_.size(); ++c) {
    const auto& tri = m.cells_[c];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(m.edges_.size()));
      if (inserted) {
        m.edges_.push_back({key.first, key.second});
        edge_cell_count.push_back(0);
      }
      ++edge_cell_count[it->second];
      m.cell_edges_[c][k] = it->second;
      // Counterclockwise traversal a->b has outward normal = tangent rotated clockwise.
      m.cell_edge_signs_[c][k] = a < b ? 1 : -1;
    }
  }

  m.edge_on_boundary_.assign(m.edges_.size(), 0);
  m.vertex_on_boundary_.assign(m.vertices_.size(), 0);
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    if (edge_cell_count[e] == 1) {
      m.edge_on_boundary_[e] = 1;
      m.boundary_edges_.push_back(static_cast<int>(e));
      m.vertex_on_boundary_[m.edges_[e][0]] = 1;
      m.vertex_on_boundary_[m.edges_[e][1]] = 1;
    }
  }
  for (std::size_t v = 0; v < m.vertices_.size(); ++v)
    if (m.vertex_on_boundary_[v]) m.boundary_vertices_.push_back(static_cast<int>(v));

  return m;
}

double Mesh::signed_area(int cell) const {
  const auto p = cell_points(cell);
  return 0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
}

Vec2 Mesh::centroid(int cell) const {
  const auto p = cell_points(cell);
  return {(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0};
}

std::array<Vec2, 3> Mesh::cell_points(int cell) const {
  const auto& t = cells_[cell];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

void Mesh::write_text(std::ostream& os) const {
  os << n_div_ << '\n';
  const auto old = os.precision(17);
  for (const auto& v : vertices_) os << v.x << ' ' << v.y << '\n';
  for (const auto& c : cells_) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os.precision(old);
}

std::vector<Mesh> mesh_hierarchy(std::span<const int> levels) {
  if (levels.empty()) throw std::invalid_argument("mesh_hierarchy: empty level list");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("mesh_hierarchy: levels must be strictly increasing");
  std::vector<Mesh> out;
  out.reserve(levels.size());
  for (int n : levels) out.push_back(Mesh::unit_square(n));
  return out;
}

}  // namespace biot
