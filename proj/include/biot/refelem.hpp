#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "biot/geometry.hpp"

namespace biot {

/// Finite element families on the reference triangle (0,0), (1,0), (0,1).
enum class Family { LagrangeP1, LagrangeP2, LagrangeP3, RaviartThomas0, DG0 };

inline constexpr int kMaxCellDofs = 10;

int dofs_per_cell(Family family);
bool is_vector_family(Family family);
std::string_view family_name(Family family);

/// Per-basis values at one point. Scalar families fill value/grad; the
/// Raviart-Thomas family fills vec/vec_grad/div.
struct BasisValues {
  Family family = Family::DG0;
  int count = 0;
  std::array<double, kMaxCellDofs> value{};
  std::array<Vec2, kMaxCellDofs> grad{};
  std::array<Vec2, 3> vec{};
  std::array<Mat2, 3> vec_grad{};
  std::array<double, 3> div{};
};

/// Reference basis. Lagrange node order: vertices, then edge nodes (edge k is
/// opposite vertex k, nodes ordered from its lower to its higher local
/// vertex), then the P3 interior node. RT0 function k has unit outward normal
/// moment on edge k.
BasisValues eval_basis(Family family, Vec2 ref_point);

/// Lagrange interpolation nodes in reference coordinates.
std::span<const Vec2> reference_nodes(Family family);

/// Local endpoints (lower, higher local vertex) of local edge k.
constexpr std::array<int, 2> local_edge_vertices(int k) {
  return k == 0 ? std::array<int, 2>{1, 2} : (k == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1});
}

/// x = origin + J x_hat for a cell with vertices p0, p1, p2.
struct AffineMap {
  Vec2 origin;
  Mat2 jacobian;
  double det = 0.0;
  Mat2 inv_transpose;

  static AffineMap from_points(const std::array<Vec2, 3>& p);
  Vec2 to_physical(Vec2 ref) const { return origin + jacobian * ref; }
  Vec2 to_reference(Vec2 x) const;
};

/// Map reference values to a physical cell: Lagrange gradients by J^{-T},
/// RT0 by the contravariant Piola map times the per-edge orientation sign.
BasisValues push_forward(const BasisValues& ref, const AffineMap& map, std::span<const int> edge_signs = {});

struct QuadratureRule {
  int degree = 0;  // exactness degree actually provided
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2
};

/// Symmetric rule with positive weights exact to at least `degree` (1..10).
const QuadratureRule& quadrature(int degree);

/// Gauss-Legendre rule on [0, 1] with `n` points (1..4).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
const LineRule& gauss_line(int n);

}  // namespace biot
