#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "biot/assemble.hpp"
#include "biot/problem.hpp"
#include "biot/space.hpp"

namespace biot {

enum class NormKind { L2, H1, Hdiv, W };

std::string_view norm_name(NormKind kind);

struct NormParams {
  double tau = 1.0;
  double kappa = 1.0;  // W-norm only
  int quadrature_degree = 8;
};

double norm(const DiscreteField& field, NormKind kind, const NormParams& params = {});
/// ||a - b|| for two fields on the same mesh (spaces may differ).
double difference_norm(const DiscreteField& a, const DiscreteField& b, NormKind kind, const NormParams& params = {});

enum class ErrorReference { cubic_interpolant, analytic };

struct RelativeErrors {
  double displacement = 0.0;  // H1
  double pressure = 0.0;      // L2
  double flux_w = 0.0;        // weighted flux norm
  double flux_hdiv = 0.0;     // H(div)
};

RelativeErrors relative_error(const DiscreteField& u_h, const DiscreteField& z_h, const DiscreteField& p_h,
                              const ManufacturedProblem& problem, double time,
                              ErrorReference reference = ErrorReference::cubic_interpolant);

/// log2(e_coarse / e_fine)
double rate(double e_coarse, double e_fine);

enum class Quantity { displacement, pressure, flux_w, flux_hdiv };

std::string_view quantity_name(Quantity q);

struct ErrorRow {
  Quantity quantity = Quantity::displacement;
  Pairing pairing = Pairing::P2_RT0_DG0;
  double kappa = 1.0;
  double c0 = 0.0;
  std::vector<double> values;  // one per level, NaN marks a failed cell
  std::optional<double> rate;  // from the last two entries
};

struct ErrorTable {
  std::vector<int> levels;  // n_div per column
  std::vector<ErrorRow> rows;

  void compute_rates();
  const ErrorRow* find(Quantity q, Pairing p, double kappa, double c0) const;
};

}  // namespace biot
