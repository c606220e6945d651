#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "biot/space.hpp"
#include "biot/sparse.hpp"

namespace biot {

enum class FormKind {
  a,          // elastic stress against strain
  b_uq,       // div(displacement) against pressure
  b_wq,       // div(flux) against pressure
  c,          // inverse conductivity times flux mass
  d,          // storage times pressure mass
  mass,       // plain L2 Gram
  grad_grad,  // H1 seminorm Gram
  div_div,    // div against div
};

std::string_view form_name(FormKind kind);

struct FormParams {
  double mu = 1.0;
  double lambda = 1.0;
  // sigma = stress_factor * mu * eps + lambda * tr(eps) I
  double stress_factor = 2.0;
  double kappa = 1.0;
  double c0 = 0.0;
  int quadrature_degree = 4;
};

/// Rows follow the test space, columns the trial space.
CsrMatrix assemble_form(FormKind kind, const FunctionSpace& trial, const FunctionSpace& test,
                        const FormParams& params = {});

enum class Pairing { P2_RT0_DG0, P2_P1_DG0 };

std::string_view pairing_name(Pairing p);
std::optional<Pairing> parse_pairing(std::string_view name);
SpaceKind flux_space_kind(Pairing p);

struct BiotParams {
  double mu = 1.0;
  double lambda = 1.0;
  double stress_factor = 2.0;
  double kappa = 1.0;
  double c0 = 0.0;
  double tau = 1.0;
  FluxBoundary flux_boundary = FluxBoundary::full;
};

struct BodyLoads {
  VectorFunction f;
  VectorFunction g;  // may be empty (treated as zero)
  ScalarFunction s;
};

/// One implicit Euler step of the three-field system, pressure row scaled by tau.
struct BiotSystem {
  Pairing pairing = Pairing::P2_RT0_DG0;
  BiotParams params;
  bool mean_constraint = true;

  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FunctionSpace> U, W, Q;

  CsrMatrix A, Bu, Bz, C, D;
  std::vector<double> m;  // cell areas

  CsrMatrix K;  // composed, boundary conditions applied
  std::size_t offset_u = 0, offset_w = 0, offset_p = 0, offset_lambda = 0;
  std::size_t dimension = 0;
  std::vector<int> constrained;  // indices into K

  std::size_t free_unknowns() const { return dimension - constrained.size(); }
  /// +1 for displacement/flux rows, -1 for pressure and multiplier rows.
  std::vector<int> block_signs() const;
};

BiotSystem assemble_biot_step(Pairing pairing, std::shared_ptr<const Mesh> mesh, const BiotParams& params,
                              bool use_mean_constraint = true);

/// Block right-hand side for a step; u_prev/p_prev are coefficient vectors
/// on U and Q (empty means zero).
std::vector<double> assemble_load(const BiotSystem& sys, const BodyLoads& loads, std::span<const double> u_prev,
                                  std::span<const double> p_prev);

}  // namespace biot
