#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "biot/geometry.hpp"

namespace biot {

/// Uniform right-diagonal triangulation of the unit square.
///
/// Vertices are numbered row by row (vertex (i, j) -> j * (n + 1) + i), each
/// grid square is split along its lower-left to upper-right diagonal into the
/// counterclockwise triangles (v00, v10, v11) and (v00, v11, v01), and edges
/// get indices in order of first appearance while walking cells.
///
/// Local edge k of a cell is the edge opposite local vertex k. Every edge is
/// stored as (lo, hi) with lo < hi; its global normal is the tangent lo->hi
/// rotated clockwise. The per-cell sign is +1 when that global normal is the
/// cell's outward normal.
class Mesh {
 public:
  static Mesh unit_square(int n_div);

  int n_div() const { return n_div_; }
  double h() const { return 1.0 / n_div_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const std::array<int, 3>> cells() const { return cells_; }
  std::span<const std::array<int, 2>> edges() const { return edges_; }
  std::span<const std::array<int, 3>> cell_edges() const { return cell_edges_; }
  std::span<const std::array<int, 3>> cell_edge_signs() const { return cell_edge_signs_; }
  std::span<const int> boundary_vertices() const { return boundary_vertices_; }
  std::span<const int> boundary_edges() const { return boundary_edges_; }

  bool is_boundary_vertex(int v) const { return vertex_on_boundary_[v] != 0; }
  bool is_boundary_edge(int e) const { return edge_on_boundary_[e] != 0; }

  double signed_area(int cell) const;
  Vec2 centroid(int cell) const;
  std::array<Vec2, 3> cell_points(int cell) const;

  /// Plain-text dump: n_div, then one "x y" line per vertex, then one
  /// "a b c" line per cell.
  void write_text(std::ostream& os) const;

 private:
  Mesh() = default;

  int n_div_ = 0;
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> cell_edge_signs_;
  std::vector<int> boundary_vertices_;
  std::vector<int> boundary_edges_;
  std::vector<std::uint8_t> vertex_on_boundary_;
  std::vector<std::uint8_t> edge_on_boundary_;
};

/// One independent mesh per entry; entries must be positive and strictly increasing.
std::vector<Mesh> mesh_hierarchy(std::span<const int> levels);

}  // namespace biot
