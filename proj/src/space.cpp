#include "biot/space.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace biot {

std::string_view space_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P2v: return "P2v";
    case SpaceKind::P1v: return "P1v";
    case SpaceKind::RT0: return "RT0";
    case SpaceKind::DG0: return "DG0";
    case SpaceKind::P3s: return "P3s";
    case SpaceKind::P3v: return "P3v";
  }
  return "?";
}

std::string_view flux_boundary_name(FluxBoundary fb) { return fb == FluxBoundary::full ? "full" : "normal"; }

FunctionSpace::FunctionSpace(SpaceKind kind, std::shared_ptr<const Mesh> mesh, FluxBoundary flux_boundary)
    : kind_(kind), flux_boundary_(flux_boundary), mesh_(std::move(mesh)) {
  if (!mesh_) throw std::invalid_argument("FunctionSpace: null mesh");
  const Mesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  const std::size_t ne = m.num_edges();
  const std::size_t nc = m.num_cells();

  switch (kind_) {
    case SpaceKind::P2v: family_ = Family::LagrangeP2; components_ = 2; scalar_dofs_ = nv + ne; break;
    case SpaceKind::P1v: family_ = Family::LagrangeP1; components_ = 2; scalar_dofs_ = nv; break;
    case SpaceKind::RT0: family_ = Family::RaviartThomas0; components_ = 1; scalar_dofs_ = ne; break;
    case SpaceKind::DG0: family_ = Family::DG0; components_ = 1; scalar_dofs_ = nc; break;
    case SpaceKind::P3s: family_ = Family::LagrangeP3; components_ = 1; scalar_dofs_ = nv + 2 * ne + nc; break;
    case SpaceKind::P3v: family_ = Family::LagrangeP3; components_ = 2; scalar_dofs_ = nv + 2 * ne + nc; break;
  }
  dof_count_ = scalar_dofs_ * components_;
  const int nloc = dofs_per_cell(family_);
  local_dofs_ = nloc * components_;

  cell_dofs_.resize(nc * local_dofs_);
  const auto cells = m.cells();
  const auto cedges = m.cell_edges();
  std::vector<int> scalar(nloc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& tri = cells[c];
    const auto& ce = cedges[c];
    switch (family_) {
      case Family::LagrangeP1:
        for (int i = 0; i < 3; ++i) scalar[i] = tri[i];
        break;
      case Family::LagrangeP2:
        for (int i = 0; i < 3; ++i) scalar[i] = tri[i];
        for (int k = 0; k < 3; ++k) scalar[3 + k] = static_cast<int>(nv) + ce[k];
        break;
      case Family::LagrangeP3:
        for (int i = 0; i < 3; ++i) scalar[i] = tri[i];
        for (int k = 0; k < 3; ++k) {
          const auto [a, b] = local_edge_vertices(k);
          const int base = static_cast<int>(nv) + 2 * ce[k];
          const bool aligned = tri[a] < tri[b];
          scalar[3 + 2 * k] = aligned ? base : base + 1;
          scalar[3 + 2 * k + 1] = aligned ? base + 1 : base;
        }
        scalar[9] = static_cast<int>(nv + 2 * ne + c);
        break;
      case Family::RaviartThomas0:
        for (int k = 0; k < 3; ++k) scalar[k] = ce[k];
        break;
      case Family::DG0:
        scalar[0] = static_cast<int>(c);
        break;
    }
    int* out = cell_dofs_.data() + c * local_dofs_;
    for (int comp = 0; comp < components_; ++comp)
      for (int i = 0; i < nloc; ++i) out[comp * nloc + i] = scalar[i] + comp * static_cast<int>(scalar_dofs_);
  }

  constrained_mask_.assign(dof_count_, 0);
  const int sd = static_cast<int>(scalar_dofs_);
  auto constrain = [&](int dof) { constrained_mask_[dof] = 1; };
  if (kind_ == SpaceKind::P2v) {
    for (int v : m.boundary_vertices()) {
      constrain(v);
      constrain(v + sd);
    }
    for (int e : m.boundary_edges()) {
      constrain(static_cast<int>(nv) + e);
      constrain(static_cast<int>(nv) + e + sd);
    }
  } else if (kind_ == SpaceKind::P1v) {
    const auto verts = m.vertices();
    const bool full = flux_boundary_ == FluxBoundary::full;
    for (int v : m.boundary_vertices()) {
      const Vec2 p = verts[v];
      if (full || p.x == 0.0 || p.x == 1.0) constrain(v);
      if (full || p.y == 0.0 || p.y == 1.0) constrain(v + sd);
    }
  } else if (kind_ == SpaceKind::RT0) {
    for (int e : m.boundary_edges()) constrain(e);
  }
  for (std::size_t d = 0; d < dof_count_; ++d)
    if (constrained_mask_[d]) constrained_.push_back(static_cast<int>(d));
}

void FunctionSpace::tabulate(int cell, const QuadratureRule& rule, CellTabulation& out) const {
  const AffineMap map = AffineMap::from_points(mesh_->cell_points(cell));
  const int nq = static_cast<int>(rule.points.size());
  const int nd = local_dofs_;
  const int nloc = dofs_per_cell(family_);
  out.ndofs = nd;
  out.nq = nq;
  out.vector_valued = vector_valued();
  out.points.resize(nq);
  out.weights.resize(nq);
  if (out.vector_valued) {
    out.v_value.assign(static_cast<std::size_t>(nq) * nd, Vec2{});
    out.v_grad.assign(static_cast<std::size_t>(nq) * nd, Mat2{});
    out.v_div.assign(static_cast<std::size_t>(nq) * nd, 0.0);
  } else {
    out.s_value.resize(static_cast<std::size_t>(nq) * nd);
    out.s_grad.resize(static_cast<std::size_t>(nq) * nd);
  }
  const auto signs = cell_signs(cell);
  for (int q = 0; q < nq; ++q) {
    out.points[q] = map.to_physical(rule.points[q]);
    out.weights[q] = rule.weights[q] * std::abs(map.det);
    const BasisValues phys = push_forward(eval_basis(family_, rule.points[q]), map, signs);
    const std::size_t base = static_cast<std::size_t>(q) * nd;
    if (family_ == Family::RaviartThomas0) {
      for (int i = 0; i < 3; ++i) {
        out.v_value[base + i] = phys.vec[i];
        out.v_grad[base + i] = phys.vec_grad[i];
        out.v_div[base + i] = phys.div[i];
      }
    } else if (out.vector_valued) {
      for (int comp = 0; comp < 2; ++comp)
        for (int i = 0; i < nloc; ++i) {
          const std::size_t idx = base + comp * nloc + i;
          Vec2 v{};
          Mat2 g{};
          if (comp == 0) {
            v.x = phys.value[i];
            g(0, 0) = phys.grad[i].x;
            g(0, 1) = phys.grad[i].y;
            out.v_div[idx] = phys.grad[i].x;
          } else {
            v.y = phys.value[i];
            g(1, 0) = phys.grad[i].x;
            g(1, 1) = phys.grad[i].y;
            out.v_div[idx] = phys.grad[i].y;
          }
          out.v_value[idx] = v;
          out.v_grad[idx] = g;
        }
    } else {
      for (int i = 0; i < nloc; ++i) {
        out.s_value[base + i] = phys.value[i];
        out.s_grad[base + i] = phys.grad[i];
      }
    }
  }
}

std::shared_ptr<const FunctionSpace> build_space(SpaceKind kind, std::shared_ptr<const Mesh> mesh,
                                                 FluxBoundary flux_boundary) {
  return std::make_shared<const FunctionSpace>(kind, std::move(mesh), flux_boundary);
}

DiscreteField::DiscreteField(std::shared_ptr<const FunctionSpace> space)
    : space_(std::move(space)), coeffs_(space_->dof_count(), 0.0) {}

DiscreteField::DiscreteField(std::shared_ptr<const FunctionSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->dof_count())
    throw std::invalid_argument("DiscreteField: coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match space dimension " + std::to_string(space_->dof_count()));
}

void DiscreteField::evaluate_scalar(int cell, const CellTabulation& tab, std::span<double> value,
                                    std::span<Vec2> grad) const {
  if (tab.vector_valued) throw std::logic_error("evaluate_scalar on a vector-valued space");
  const auto dofs = space_->cell_dofs(cell);
  for (int q = 0; q < tab.nq; ++q) {
    double v = 0.0;
    Vec2 g{};
    const std::size_t base = static_cast<std::size_t>(q) * tab.ndofs;
    for (int i = 0; i < tab.ndofs; ++i) {
      const double c = coeffs_[dofs[i]];
      v += c * tab.s_value[base + i];
      g += c * tab.s_grad[base + i];
    }
    if (!value.empty()) value[q] = v;
    if (!grad.empty()) grad[q] = g;
  }
}

void DiscreteField::evaluate_vector(int cell, const CellTabulation& tab, std::span<Vec2> value,
                                    std::span<Mat2> grad, std::span<double> div) const {
  if (!tab.vector_valued) throw std::logic_error("evaluate_vector on a scalar space");
  const auto dofs = space_->cell_dofs(cell);
  for (int q = 0; q < tab.nq; ++q) {
    Vec2 v{};
    Mat2 g{};
    double d = 0.0;
    const std::size_t base = static_cast<std::size_t>(q) * tab.ndofs;
    for (int i = 0; i < tab.ndofs; ++i) {
      const double c = coeffs_[dofs[i]];
      v += c * tab.v_value[base + i];
      g = g + tab.v_grad[base + i] * c;
      d += c * tab.v_div[base + i];
    }
    if (!value.empty()) value[q] = v;
    if (!grad.empty()) grad[q] = g;
    if (!div.empty()) div[q] = d;
  }
}

void DiscreteField::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "dof,value\n";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) os << i << ',' << coeffs_[i] << '\n';
  os.precision(old);
}

namespace {

double cell_average(const ScalarFunction& f, const Mesh& mesh, int cell) {
  const auto& rule = quadrature(8);
  const AffineMap map = AffineMap::from_points(mesh.cell_points(cell));
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * f(map.to_physical(rule.points[q]));
  return s / 0.5;  // reference area
}

}  // namespace

DiscreteField interpolate(const VectorFunction& f, std::shared_ptr<const FunctionSpace> space) {
  DiscreteField out(space);
  auto coeffs = out.coefficients();
  const Mesh& mesh = space->mesh();
  if (space->kind() == SpaceKind::RT0) {
    const auto& line = gauss_line(2);
    const auto verts = mesh.vertices();
    const auto edges = mesh.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Vec2 a = verts[edges[e][0]];
      const Vec2 b = verts[edges[e][1]];
      const Vec2 t = b - a;
      const double len = t.norm();
      const Vec2 n{t.y / len, -t.x / len};
      double flux = 0.0;
      for (std::size_t q = 0; q < line.points.size(); ++q) flux += line.weights[q] * f(a + line.points[q] * t).dot(n);
      coeffs[e] = flux * len;
    }
    return out;
  }
  if (!space->vector_valued() || space->components() != 2)
    throw std::invalid_argument("interpolate: vector field into scalar space " + std::string(space_name(space->kind())));
  const auto nodes = reference_nodes(space->family());
  const int nloc = static_cast<int>(nodes.size());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = AffineMap::from_points(mesh.cell_points(static_cast<int>(c)));
    const auto dofs = space->cell_dofs(static_cast<int>(c));
    for (int i = 0; i < nloc; ++i) {
      const Vec2 v = f(map.to_physical(nodes[i]));
      coeffs[dofs[i]] = v.x;
      coeffs[dofs[nloc + i]] = v.y;
    }
  }
  return out;
}

DiscreteField interpolate(const ScalarFunction& f, std::shared_ptr<const FunctionSpace> space) {
  if (space->vector_valued())
    throw std::invalid_argument("interpolate: scalar field into vector space " + std::string(space_name(space->kind())));
  if (space->kind() == SpaceKind::DG0) return l2_project(f, std::move(space));
  DiscreteField out(space);
  auto coeffs = out.coefficients();
  const Mesh& mesh = space->mesh();
  const auto nodes = reference_nodes(space->family());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = AffineMap::from_points(mesh.cell_points(static_cast<int>(c)));
    const auto dofs = space->cell_dofs(static_cast<int>(c));
    for (std::size_t i = 0; i < nodes.size(); ++i) coeffs[dofs[i]] = f(map.to_physical(nodes[i]));
  }
  return out;
}

DiscreteField l2_project(const ScalarFunction& f, std::shared_ptr<const FunctionSpace> dg0) {
  if (dg0->kind() != SpaceKind::DG0) throw std::invalid_argument("l2_project: target must be DG0");
  DiscreteField out(dg0);
  auto coeffs = out.coefficients();
  const Mesh& mesh = dg0->mesh();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) coeffs[c] = cell_average(f, mesh, static_cast<int>(c));
  return out;
}

DiscreteField l2_project(const DiscreteField& f, std::shared_ptr<const FunctionSpace> dg0) {
  if (dg0->kind() != SpaceKind::DG0) throw std::invalid_argument("l2_project: target must be DG0");
  if (f.space().vector_valued()) throw std::invalid_argument("l2_project: source field must be scalar");
  if (&f.space().mesh() != &dg0->mesh() && f.space().mesh().n_div() != dg0->mesh().n_div())
    throw std::invalid_argument("l2_project: fields live on different meshes");
  DiscreteField out(dg0);
  auto coeffs = out.coefficients();
  const auto& rule = quadrature(8);
  CellTabulation tab;
  std::vector<double> vals(rule.points.size());
  for (std::size_t c = 0; c < dg0->mesh().num_cells(); ++c) {
    f.space().tabulate(static_cast<int>(c), rule, tab);
    f.evaluate_scalar(static_cast<int>(c), tab, vals, {});
    double s = 0.0, area = 0.0;
    for (int q = 0; q < tab.nq; ++q) {
      s += tab.weights[q] * vals[q];
      area += tab.weights[q];
    }
    coeffs[c] = s / area;
  }
  return out;
}

void apply_essential_bcs(CsrMatrix& k, std::span<double> rhs, std::span<const int> dofs) {
  if (k.rows() != k.cols()) throw std::invalid_argument("apply_essential_bcs: matrix must be square");
  std::vector<std::uint8_t> mask(k.rows(), 0);
  for (int d : dofs) {
    if (d < 0 || static_cast<std::size_t>(d) >= k.rows()) throw std::out_of_range("apply_essential_bcs: dof out of range");
    mask[d] = 1;
  }
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  const auto vals = k.values();
  TripletBuilder b(k.rows(), k.cols());
  b.reserve(k.nnz() + dofs.size());
  for (std::size_t r = 0; r < k.rows(); ++r) {
    if (mask[r]) {
      b.add(static_cast<int>(r), static_cast<int>(r), 1.0);
      continue;
    }
    for (int p = rp[r]; p < rp[r + 1]; ++p)
      if (!mask[ci[p]]) b.add(static_cast<int>(r), ci[p], vals[p]);
  }
  const bool sym = k.symmetric();
  k = b.build(sym);
  if (!rhs.empty())
    for (int d : dofs) rhs[d] = 0.0;
}

}  // namespace biot
