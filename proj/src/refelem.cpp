#include "biot/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace biot {
namespace {

constexpr double kInsideTol = 1e-12;

constexpr std::array<Vec2, 3> kBaryGrad{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
constexpr std::array<Vec2, 3> kRefVertices{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};

std::array<double, 3> barycentric(Vec2 p) { return {1.0 - p.x - p.y, p.x, p.y}; }

void eval_p1(const std::array<double, 3>& l, BasisValues& out) {
  for (int i = 0; i < 3; ++i) {
    out.value[i] = l[i];
    out.grad[i] = kBaryGrad[i];
  }
}

void eval_p2(const std::array<double, 3>& l, BasisValues& out) {
  for (int i = 0; i < 3; ++i) {
    out.value[i] = l[i] * (2.0 * l[i] - 1.0);
    out.grad[i] = (4.0 * l[i] - 1.0) * kBaryGrad[i];
  }
  for (int k = 0; k < 3; ++k) {
    const auto [a, b] = local_edge_vertices(k);
    out.value[3 + k] = 4.0 * l[a] * l[b];
    out.grad[3 + k] = 4.0 * (l[b] * kBaryGrad[a] + l[a] * kBaryGrad[b]);
  }
}

void eval_p3(const std::array<double, 3>& l, BasisValues& out) {
  for (int i = 0; i < 3; ++i) {
    const double li = l[i];
    out.value[i] = 0.5 * li * (3.0 * li - 1.0) * (3.0 * li - 2.0);
    out.grad[i] = (0.5 * (27.0 * li * li - 18.0 * li + 2.0)) * kBaryGrad[i];
  }
  for (int k = 0; k < 3; ++k) {
    const auto [a, b] = local_edge_vertices(k);
    // node closer to a, then node closer to b
    const int ends[2][2] = {{a, b}, {b, a}};
    for (int s = 0; s < 2; ++s) {
      const int near = ends[s][0];
      const int far = ends[s][1];
      const double ln = l[near];
      const double lf = l[far];
      out.value[3 + 2 * k + s] = 4.5 * ln * lf * (3.0 * ln - 1.0);
      out.grad[3 + 2 * k + s] =
          4.5 * (lf * (6.0 * ln - 1.0) * kBaryGrad[near] + ln * (3.0 * ln - 1.0) * kBaryGrad[far]);
    }
  }
  out.value[9] = 27.0 * l[0] * l[1] * l[2];
  out.grad[9] = 27.0 * (l[1] * l[2] * kBaryGrad[0] + l[0] * l[2] * kBaryGrad[1] + l[0] * l[1] * kBaryGrad[2]);
}

void eval_rt0(Vec2 p, BasisValues& out) {
  for (int i = 0; i < 3; ++i) {
    out.vec[i] = p - kRefVertices[i];
    out.vec_grad[i] = Mat2::identity();
    out.div[i] = 2.0;
  }
}

std::vector<Vec2> make_nodes(Family f) {
  std::vector<Vec2> nodes(kRefVertices.begin(), kRefVertices.end());
  if (f == Family::LagrangeP2) {
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = local_edge_vertices(k);
      nodes.push_back(0.5 * (kRefVertices[a] + kRefVertices[b]));
    }
  } else if (f == Family::LagrangeP3) {
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = local_edge_vertices(k);
      nodes.push_back((2.0 / 3.0) * kRefVertices[a] + (1.0 / 3.0) * kRefVertices[b]);
      nodes.push_back((1.0 / 3.0) * kRefVertices[a] + (2.0 / 3.0) * kRefVertices[b]);
    }
    nodes.push_back({1.0 / 3.0, 1.0 / 3.0});
  } else if (f == Family::DG0) {
    nodes = {{1.0 / 3.0, 1.0 / 3.0}};
  }
  return nodes;
}

}  // namespace

int dofs_per_cell(Family family) {
  switch (family) {
    case Family::LagrangeP1: return 3;
    case Family::LagrangeP2: return 6;
    case Family::LagrangeP3: return 10;
    case Family::RaviartThomas0: return 3;
    case Family::DG0: return 1;
  }
  return 0;
}

bool is_vector_family(Family family) { return family == Family::RaviartThomas0; }

std::string_view family_name(Family family) {
  switch (family) {
    case Family::LagrangeP1: return "P1";
    case Family::LagrangeP2: return "P2";
    case Family::LagrangeP3: return "P3";
    case Family::RaviartThomas0: return "RT0";
    case Family::DG0: return "DG0";
  }
  return "?";
}

BasisValues eval_basis(Family family, Vec2 p) {
  if (p.x < -kInsideTol || p.y < -kInsideTol || p.x + p.y > 1.0 + kInsideTol)
    throw std::invalid_argument("eval_basis: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                ") outside the reference triangle");
  BasisValues out;
  out.family = family;
  out.count = dofs_per_cell(family);
  const auto l = barycentric(p);
  switch (family) {
    case Family::LagrangeP1: eval_p1(l, out); break;
    case Family::LagrangeP2: eval_p2(l, out); break;
    case Family::LagrangeP3: eval_p3(l, out); break;
    case Family::RaviartThomas0: eval_rt0(p, out); break;
    case Family::DG0:
      out.value[0] = 1.0;
      out.grad[0] = {0.0, 0.0};
      break;
  }
  return out;
}

std::span<const Vec2> reference_nodes(Family family) {
  static const std::vector<Vec2> p1 = make_nodes(Family::LagrangeP1);
  static const std::vector<Vec2> p2 = make_nodes(Family::LagrangeP2);
  static const std::vector<Vec2> p3 = make_nodes(Family::LagrangeP3);
  static const std::vector<Vec2> dg0 = make_nodes(Family::DG0);
  switch (family) {
    case Family::LagrangeP1: return p1;
    case Family::LagrangeP2: return p2;
    case Family::LagrangeP3: return p3;
    case Family::DG0: return dg0;
    case Family::RaviartThomas0: break;
  }
  throw std::invalid_argument("reference_nodes: RT0 has no point-evaluation nodes");
}

AffineMap AffineMap::from_points(const std::array<Vec2, 3>& p) {
  AffineMap m;
  m.origin = p[0];
  m.jacobian = Mat2{{p[1].x - p[0].x, p[2].x - p[0].x, p[1].y - p[0].y, p[2].y - p[0].y}};
  m.det = m.jacobian.det();
  const double scale = std::max({std::abs(m.jacobian.a[0]), std::abs(m.jacobian.a[1]),
                                 std::abs(m.jacobian.a[2]), std::abs(m.jacobian.a[3])});
  if (!(std::abs(m.det) > 1e-14 * scale * scale)) throw std::invalid_argument("AffineMap: singular cell Jacobian");
  const Mat2& J = m.jacobian;
  // inverse of J is adj(J) / det; its transpose is:
  m.inv_transpose = Mat2{{J(1, 1) / m.det, -J(1, 0) / m.det, -J(0, 1) / m.det, J(0, 0) / m.det}};
  return m;
}

Vec2 AffineMap::to_reference(Vec2 x) const {
  const Vec2 d = x - origin;
  // J^{-1} d = (J^{-T})^T d
  return inv_transpose.transpose() * d;
}

BasisValues push_forward(const BasisValues& ref, const AffineMap& map, std::span<const int> edge_signs) {
  BasisValues out = ref;
  if (ref.family == Family::RaviartThomas0) {
    if (edge_signs.size() != 3) throw std::invalid_argument("push_forward: RT0 needs three edge signs");
    const double inv_det = 1.0 / map.det;
    const Mat2 jinv = map.inv_transpose.transpose();
    for (int i = 0; i < 3; ++i) {
      const double s = edge_signs[i];
      out.vec[i] = (s * inv_det) * (map.jacobian * ref.vec[i]);
      Mat2 g;
      // d/dx of (J v_hat(x_hat))/det = J (d v_hat/d x_hat) J^{-1} / det
      const Mat2& gh = ref.vec_grad[i];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          double acc = 0.0;
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) acc += map.jacobian(r, k) * gh(k, l) * jinv(l, c);
          g(r, c) = s * inv_det * acc;
        }
      out.vec_grad[i] = g;
      out.div[i] = s * inv_det * ref.div[i];
    }
    return out;
  }
  for (int i = 0; i < ref.count; ++i) out.grad[i] = map.inv_transpose * ref.grad[i];
  return out;
}

}  // namespace biot
