#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "biot/mesh.hpp"
#include "biot/refelem.hpp"
#include "biot/sparse.hpp"

namespace biot {

/// Global spaces used by the solver.
///   P2v  continuous quadratic vectors (displacement), u = 0 on the boundary
///   P1v  continuous linear vectors (Lagrange flux), z = 0 or z.n = 0 on the boundary
///   RT0  lowest-order Raviart-Thomas (H(div) flux), z.n = 0 on the boundary
///   DG0  piecewise constants (pressure), no essential condition
///   P3s / P3v  continuous cubics, used to represent exact solutions
enum class SpaceKind { P2v, P1v, RT0, DG0, P3s, P3v };

std::string_view space_name(SpaceKind kind);

/// How the Lagrange flux space imposes z.n = 0 on the square. `full` clamps
/// both components at boundary vertices, `normal` only the normal one.
enum class FluxBoundary { full, normal };

std::string_view flux_boundary_name(FluxBoundary fb);

using ScalarFunction = std::function<double(Vec2)>;
using VectorFunction = std::function<Vec2(Vec2)>;

/// Physical basis data for one cell at the points of a quadrature rule.
/// Arrays are indexed [q * ndofs + i]. Scalar spaces fill s_value/s_grad;
/// vector-valued spaces fill v_value/v_grad/v_div.
struct CellTabulation {
  int ndofs = 0;
  int nq = 0;
  bool vector_valued = false;
  std::vector<Vec2> points;
  std::vector<double> weights;  // physical weights (include |det J|)
  std::vector<double> s_value;
  std::vector<Vec2> s_grad;
  std::vector<Vec2> v_value;
  std::vector<Mat2> v_grad;
  std::vector<double> v_div;
};

class FunctionSpace {
 public:
  FunctionSpace(SpaceKind kind, std::shared_ptr<const Mesh> mesh, FluxBoundary flux_boundary = FluxBoundary::full);

  SpaceKind kind() const { return kind_; }
  FluxBoundary flux_boundary() const { return flux_boundary_; }
  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  Family family() const { return family_; }
  bool vector_valued() const { return kind_ != SpaceKind::DG0 && kind_ != SpaceKind::P3s; }
  /// Number of Cartesian component blocks (2 for vector Lagrange spaces, else 1).
  int components() const { return components_; }

  std::size_t dof_count() const { return dof_count_; }
  std::size_t scalar_dof_count() const { return scalar_dofs_; }
  int local_dof_count() const { return local_dofs_; }

  /// Global DOFs of a cell; for vector Lagrange spaces the x-component block
  /// comes first, then the y-component block.
  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * local_dofs_, static_cast<std::size_t>(local_dofs_)};
  }
  /// Edge orientation signs of a cell (meaningful for RT0).
  std::span<const int> cell_signs(int cell) const { return mesh_->cell_edge_signs()[cell]; }

  std::span<const int> constrained_dofs() const { return constrained_; }
  bool is_constrained(int dof) const { return constrained_mask_[dof] != 0; }

  void tabulate(int cell, const QuadratureRule& rule, CellTabulation& out) const;

 private:
  SpaceKind kind_;
  FluxBoundary flux_boundary_;
  std::shared_ptr<const Mesh> mesh_;
  Family family_;
  int components_ = 1;
  std::size_t scalar_dofs_ = 0;
  std::size_t dof_count_ = 0;
  int local_dofs_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> constrained_;
  std::vector<std::uint8_t> constrained_mask_;
};

std::shared_ptr<const FunctionSpace> build_space(SpaceKind kind, std::shared_ptr<const Mesh> mesh,
                                                 FluxBoundary flux_boundary = FluxBoundary::full);

/// Coefficient vector over a space.
class DiscreteField {
 public:
  explicit DiscreteField(std::shared_ptr<const FunctionSpace> space);
  DiscreteField(std::shared_ptr<const FunctionSpace> space, std::vector<double> coefficients);

  const FunctionSpace& space() const { return *space_; }
  const std::shared_ptr<const FunctionSpace>& space_ptr() const { return space_; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  /// Values at the points of `tab` (which must come from this space's tabulate()).
  void evaluate_scalar(int cell, const CellTabulation& tab, std::span<double> value, std::span<Vec2> grad) const;
  void evaluate_vector(int cell, const CellTabulation& tab, std::span<Vec2> value, std::span<Mat2> grad,
                       std::span<double> div) const;

  /// "dof,value" lines with a header.
  void write_csv(std::ostream& os) const;

 private:
  std::shared_ptr<const FunctionSpace> space_;
  std::vector<double> coeffs_;
};

/// Nodal interpolation (Lagrange), edge normal moments with two-point Gauss
/// (RT0) or cell averages (DG0).
DiscreteField interpolate(const VectorFunction& f, std::shared_ptr<const FunctionSpace> space);
DiscreteField interpolate(const ScalarFunction& f, std::shared_ptr<const FunctionSpace> space);

/// L2 projection onto DG0 (cell averages, degree-8 quadrature).
DiscreteField l2_project(const ScalarFunction& f, std::shared_ptr<const FunctionSpace> dg0);
DiscreteField l2_project(const DiscreteField& f, std::shared_ptr<const FunctionSpace> dg0);

/// Symmetric elimination of the listed DOFs: rows and columns zeroed, unit
/// diagonal, zero right-hand side.
void apply_essential_bcs(CsrMatrix& k, std::span<double> rhs, std::span<const int> dofs);

}  // namespace biot
