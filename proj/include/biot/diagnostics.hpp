#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "biot/assemble.hpp"
#include "biot/space.hpp"

namespace biot {

/// max over free basis functions w of ||div w - P_Q div w|| / max(||div w||, 1e-14),
/// with P_Q the L2 projection onto the (DG0) space Q.
double containment_residual(const FunctionSpace& W, const FunctionSpace& Q);

/// Discrete inf-sup value of (div v, q) against ||v||_1 x ||q||_0 with constant
/// pressures removed. Pressure modes in the kernel of the transpose (eigenvalue
/// below 1e-10 of the largest) are counted, and beta is taken over the rest.
struct InfSup {
  double beta = 0.0;
  int spurious_modes = 0;
};

InfSup stokes_infsup(const FunctionSpace& U, const FunctionSpace& Q);
std::vector<InfSup> stokes_infsup(SpaceKind velocity, std::span<const int> levels);

/// Flux x pressure norms. standard: H(div) x L2; A: (kappa^-1/2 L2 cap H(div)) x L2;
/// B: kappa^-1/2 H(div) x kappa^1/2 L2.
enum class DarcyNorms { standard, A, B };

std::string_view darcy_norms_name(DarcyNorms n);
std::optional<DarcyNorms> parse_darcy_norms(std::string_view name);

struct DarcyConstants {
  DarcyNorms norms = DarcyNorms::standard;
  double beta = 0.0;          // inf-sup of b
  int spurious_modes = 0;
  double alpha_kernel = 0.0;  // coercivity of c on ker b (infinite if the kernel is trivial)
  double c_b = 0.0;           // continuity of b
  double c_c = 0.0;           // continuity of c
};

DarcyConstants darcy_brezzi(const FunctionSpace& W, const FunctionSpace& Q, DarcyNorms norms, double kappa);

/// Smallest singular value of the one-step Biot operator in the norm
/// ||u||_1^2 + tau/kappa ||w||^2 + tau^2 ||div w||^2 + ||q||^2, pressures mean-free.
double composite_infsup(Pairing pairing, int n_div, const BiotParams& params);

struct DiagnosticReport {
  Pairing pairing = Pairing::P2_RT0_DG0;
  int level = 4;
  double kappa = 1.0;
  double c0 = 0.0;
  double containment = 0.0;
  InfSup stokes;
  std::vector<DarcyConstants> darcy;  // one per DarcyNorms value
  double gamma = 0.0;
};

DiagnosticReport diagnose(Pairing pairing, int n_div, const BiotParams& params);

}  // namespace biot
