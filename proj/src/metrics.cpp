#include "biot/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biot {

std::string_view norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::L2: return "L2";
    case NormKind::H1: return "H1";
    case NormKind::Hdiv: return "Hdiv";
    case NormKind::W: return "W";
  }
  return "?";
}

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::displacement: return "displacement";
    case Quantity::pressure: return "pressure";
    case Quantity::flux_w: return "flux";
    case Quantity::flux_hdiv: return "flux_hdiv";
  }
  return "?";
}

namespace {

// Values of one field at the quadrature points of a cell.
struct Samples {
  bool vector = false;
  std::vector<double> s, div;
  std::vector<Vec2> sg, v;
  std::vector<Mat2> vg;

  void resize(int nq) {
    s.assign(nq, 0.0);
    div.assign(nq, 0.0);
    sg.assign(nq, Vec2{});
    v.assign(nq, Vec2{});
    vg.assign(nq, Mat2{});
  }
};

void sample(const DiscreteField& f, int cell, const QuadratureRule& rule, CellTabulation& tab, Samples& out) {
  f.space().tabulate(cell, rule, tab);
  out.vector = tab.vector_valued;
  out.resize(tab.nq);
  if (out.vector)
    f.evaluate_vector(cell, tab, out.v, out.vg, out.div);
  else
    f.evaluate_scalar(cell, tab, out.s, out.sg);
}

double pointwise(const Samples& a, const Samples* b, int q, NormKind kind, const NormParams& p) {
  if (a.vector) {
    Vec2 v = a.v[q];
    Mat2 g = a.vg[q];
    double d = a.div[q];
    if (b) {
      v = v - b->v[q];
      g = g - b->vg[q];
      d -= b->div[q];
    }
    switch (kind) {
      case NormKind::L2: return v.dot(v);
      case NormKind::H1: return v.dot(v) + g.ddot(g);
      case NormKind::Hdiv: return v.dot(v) + d * d;
      case NormKind::W: return p.tau / p.kappa * v.dot(v) + p.tau * p.tau * d * d;
    }
  } else {
    double s = a.s[q];
    Vec2 g = a.sg[q];
    if (b) {
      s -= b->s[q];
      g = g - b->sg[q];
    }
    switch (kind) {
      case NormKind::L2: return s * s;
      case NormKind::H1: return s * s + g.dot(g);
      default: break;
    }
  }
  throw std::invalid_argument("norm " + std::string(norm_name(kind)) + " needs a vector field");
}

void check_params(NormKind kind, const NormParams& p) {
  if (kind == NormKind::W && !(p.kappa > 0.0)) throw std::invalid_argument("W-norm requires kappa > 0");
  if (kind == NormKind::W && !(p.tau > 0.0)) throw std::invalid_argument("W-norm requires tau > 0");
}

}  // namespace

double norm(const DiscreteField& field, NormKind kind, const NormParams& params) {
  check_params(kind, params);
  const auto& rule = quadrature(params.quadrature_degree);
  CellTabulation tab;
  Samples sa;
  double sum = 0.0;
  for (std::size_t c = 0; c < field.space().mesh().num_cells(); ++c) {
    sample(field, static_cast<int>(c), rule, tab, sa);
    for (int q = 0; q < tab.nq; ++q) sum += tab.weights[q] * pointwise(sa, nullptr, q, kind, params);
  }
  return std::sqrt(sum);
}

double difference_norm(const DiscreteField& a, const DiscreteField& b, NormKind kind, const NormParams& params) {
  check_params(kind, params);
  if (a.space().mesh().n_div() != b.space().mesh().n_div())
    throw std::invalid_argument("difference_norm: fields live on different meshes");
  if (a.space().vector_valued() != b.space().vector_valued())
    throw std::invalid_argument("difference_norm: cannot compare scalar and vector fields");
  const auto& rule = quadrature(params.quadrature_degree);
  CellTabulation ta, tb;
  Samples sa, sb;
  double sum = 0.0;
  for (std::size_t c = 0; c < a.space().mesh().num_cells(); ++c) {
    sample(a, static_cast<int>(c), rule, ta, sa);
    sample(b, static_cast<int>(c), rule, tb, sb);
    for (int q = 0; q < ta.nq; ++q) sum += ta.weights[q] * pointwise(sa, &sb, q, kind, params);
  }
  return std::sqrt(sum);
}

namespace {

double ratio(double num, double den, const char* what) {
  if (!(den > 0.0)) throw std::invalid_argument(std::string("relative_error: exact ") + what + " has zero norm");
  return num / den;
}

// Norms of exact - discrete with the exact fields sampled directly.
RelativeErrors analytic_errors(const DiscreteField& u_h, const DiscreteField& z_h, const DiscreteField& p_h,
                               const ManufacturedProblem& pr, double t) {
  const auto& rule = quadrature(8);
  const double tau = pr.params().tau, kappa = pr.params().kappa;
  CellTabulation tab;
  Samples su, sz, sp;
  double eu = 0, nu = 0, ep = 0, np = 0, ezw = 0, nzw = 0, ezd = 0, nzd = 0;
  for (std::size_t c = 0; c < u_h.space().mesh().num_cells(); ++c) {
    const int ci = static_cast<int>(c);
    sample(u_h, ci, rule, tab, su);
    sample(z_h, ci, rule, tab, sz);
    sample(p_h, ci, rule, tab, sp);
    for (int q = 0; q < tab.nq; ++q) {
      const Vec2 x = tab.points[q];
      const double w = tab.weights[q];
      const Vec2 u = pr.u(t, x);
      const Mat2 gu = pr.grad_u(t, x);
      const Vec2 du = u - su.v[q];
      const Mat2 dgu = gu - su.vg[q];
      eu += w * (du.dot(du) + dgu.ddot(dgu));
      nu += w * (u.dot(u) + gu.ddot(gu));
      const double p = pr.p(t, x);
      ep += w * (p - sp.s[q]) * (p - sp.s[q]);
      np += w * p * p;
      const Vec2 z = pr.z(t, x);
      const double dz = pr.div_z(t, x);
      const Vec2 ez = z - sz.v[q];
      const double edz = dz - sz.div[q];
      ezw += w * (tau / kappa * ez.dot(ez) + tau * tau * edz * edz);
      nzw += w * (tau / kappa * z.dot(z) + tau * tau * dz * dz);
      ezd += w * (ez.dot(ez) + edz * edz);
      nzd += w * (z.dot(z) + dz * dz);
    }
  }
  RelativeErrors r;
  r.displacement = ratio(std::sqrt(eu), std::sqrt(nu), "displacement");
  r.pressure = ratio(std::sqrt(ep), std::sqrt(np), "pressure");
  r.flux_w = ratio(std::sqrt(ezw), std::sqrt(nzw), "flux");
  r.flux_hdiv = ratio(std::sqrt(ezd), std::sqrt(nzd), "flux");
  return r;
}

}  // namespace

RelativeErrors relative_error(const DiscreteField& u_h, const DiscreteField& z_h, const DiscreteField& p_h,
                              const ManufacturedProblem& pr, double time, ErrorReference reference) {
  if (reference == ErrorReference::analytic) return analytic_errors(u_h, z_h, p_h, pr, time);
  const auto mesh = u_h.space().mesh_ptr();
  const auto p3v = build_space(SpaceKind::P3v, mesh);
  const auto p3s = build_space(SpaceKind::P3s, mesh);
  const DiscreteField u_ref = interpolate([&](Vec2 x) { return pr.u(time, x); }, p3v);
  const DiscreteField z_ref = interpolate([&](Vec2 x) { return pr.z(time, x); }, p3v);
  const DiscreteField p_ref = interpolate([&](Vec2 x) { return pr.p(time, x); }, p3s);

  NormParams np;
  np.tau = pr.params().tau;
  np.kappa = pr.params().kappa;
  RelativeErrors r;
  r.displacement = ratio(difference_norm(u_ref, u_h, NormKind::H1), norm(u_ref, NormKind::H1), "displacement");
  r.pressure = ratio(difference_norm(p_ref, p_h, NormKind::L2), norm(p_ref, NormKind::L2), "pressure");
  r.flux_w = ratio(difference_norm(z_ref, z_h, NormKind::W, np), norm(z_ref, NormKind::W, np), "flux");
  r.flux_hdiv = ratio(difference_norm(z_ref, z_h, NormKind::Hdiv), norm(z_ref, NormKind::Hdiv), "flux");
  return r;
}

double rate(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw std::invalid_argument("rate: errors must be positive");
  return std::log2(e_coarse / e_fine);
}

void ErrorTable::compute_rates() {
  for (auto& row : rows) {
    row.rate.reset();
    const std::size_t n = row.values.size();
    if (n < 2 || levels.size() != n) continue;
    const double a = row.values[n - 2], b = row.values[n - 1];
    if (!(a > 0.0) || !(b > 0.0)) continue;
    row.rate = std::log(a / b) / std::log(static_cast<double>(levels[n - 1]) / levels[n - 2]);
  }
}

const ErrorRow* ErrorTable::find(Quantity q, Pairing p, double kappa, double c0) const {
  for (const auto& r : rows)
    if (r.quantity == q && r.pairing == p && r.kappa == kappa && r.c0 == c0) return &r;
  return nullptr;
}

}  // namespace biot
