#include <cmath>
#include <stdexcept>
#include <string>

#include "biot/refelem.hpp"

namespace biot {
namespace {

enum class Orbit { centroid, s21, s111 };

// Weight per point (normalized so that weights sum to one over the triangle)
// and barycentric parameters of each symmetry orbit.
struct OrbitSpec {
  Orbit orbit;
  double weight;
  double a;
  double b;
};

QuadratureRule expand(int degree, std::span<const OrbitSpec> orbits) {
  QuadratureRule rule;
  rule.degree = degree;
  auto add = [&](double l1, double l2, double w) {
    rule.points.push_back({l1, l2});
    rule.weights.push_back(0.5 * w);
  };
  for (const auto& o : orbits) {
    switch (o.orbit) {
      case Orbit::centroid:
        add(1.0 / 3.0, 1.0 / 3.0, o.weight);
        break;
      case Orbit::s21: {
        const double c = 1.0 - 2.0 * o.a;
        add(o.a, c, o.weight);
        add(c, o.a, o.weight);
        add(o.a, o.a, o.weight);
        break;
      }
      case Orbit::s111: {
        const double c = 1.0 - o.a - o.b;
        const double l[3] = {o.a, o.b, c};
        const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto& p : perm) add(l[p[1]], l[p[2]], o.weight);
        break;
      }
    }
  }
  return rule;
}

// Dunavant-type rules, parameters refined to full double precision against
// the monomial moment equations.
constexpr OrbitSpec kDeg2[] = {{Orbit::s21, 1.0 / 3.0, 1.0 / 6.0, 0.0}};
constexpr OrbitSpec kDeg4[] = {
    {Orbit::s21, 0.22338158967801081, 0.44594849091596461, 0.0},
    {Orbit::s21, 0.10995174365532256, 0.091576213509771312, 0.0},
};
constexpr OrbitSpec kDeg5[] = {
    {Orbit::centroid, 0.22499999999999953, 0.0, 0.0},
    {Orbit::s21, 0.13239415278850616, 0.47014206410511505, 0.0},
    {Orbit::s21, 0.12593918054482731, 0.10128650732345645, 0.0},
};
constexpr OrbitSpec kDeg6[] = {
    {Orbit::s21, 0.11678627572626704, 0.24928674517097552, 0.0},
    {Orbit::s21, 0.050844906370185877, 0.063089014491486906, 0.0},
    {Orbit::s111, 0.08285107561844017, 0.053145049844864956, 0.31035245103373266},
};
constexpr OrbitSpec kDeg8[] = {
    {Orbit::centroid, 0.14431560767772214, 0.0, 0.0},
    {Orbit::s21, 0.095091634267325073, 0.45929258829268321, 0.0},
    {Orbit::s21, 0.10321737053472585, 0.17056930775171689, 0.0},
    {Orbit::s21, 0.032458497623203526, 0.050547228317032789, 0.0},
    {Orbit::s111, 0.027230314174419092, 0.008394777409899086, 0.26311282963476779},
};
constexpr OrbitSpec kDeg9[] = {
    {Orbit::centroid, 0.097135796285444789, 0.0, 0.0},
    {Orbit::s21, 0.031334700225001975, 0.48968251919991096, 0.0},
    {Orbit::s21, 0.077827541005607709, 0.43708959149479959, 0.0},
    {Orbit::s21, 0.079647738927229705, 0.18820353561965864, 0.0},
    {Orbit::s21, 0.025577675658629579, 0.044729513394392441, 0.0},
    {Orbit::s111, 0.043283539377524695, 0.036838412054998673, 0.22196298916043355},
};
constexpr OrbitSpec kDeg10[] = {
    {Orbit::centroid, 0.090817990381967084, 0.0, 0.0},
    {Orbit::s21, 0.036725957756497694, 0.48557763338362314, 0.0},
    {Orbit::s21, 0.045321059435600108, 0.10948157548530134, 0.0},
    {Orbit::s111, 0.072757916845268292, 0.1417072194153442, 0.30793983876432146},
    {Orbit::s111, 0.028327242531226853, 0.025003534762929443, 0.24667256064028922},
    {Orbit::s111, 0.0094216669637947597, 0.0095408154003044938, 0.066803251012461748},
};

std::vector<QuadratureRule> build_rules() {
  std::vector<QuadratureRule> rules(11);
  rules[1] = expand(1, std::array{OrbitSpec{Orbit::centroid, 1.0, 0.0, 0.0}});
  rules[2] = expand(2, kDeg2);
  // Degrees 3 and 7 have no compact positive symmetric rule in this family;
  // the next rule up is used.
  rules[4] = expand(4, kDeg4);
  rules[3] = rules[4];
  rules[5] = expand(5, kDeg5);
  rules[6] = expand(6, kDeg6);
  rules[8] = expand(8, kDeg8);
  rules[7] = rules[8];
  rules[9] = expand(9, kDeg9);
  rules[10] = expand(10, kDeg10);
  return rules;
}

}  // namespace

const QuadratureRule& quadrature(int degree) {
  static const std::vector<QuadratureRule> rules = build_rules();
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  return rules[degree];
}

const LineRule& gauss_line(int n) {
  static const std::vector<LineRule> rules = [] {
    std::vector<LineRule> r(5);
    r[1] = {{0.5}, {1.0}};
    const double g2 = 0.5 / std::sqrt(3.0);
    r[2] = {{0.5 - g2, 0.5 + g2}, {0.5, 0.5}};
    const double g3 = 0.5 * std::sqrt(0.6);
    r[3] = {{0.5 - g3, 0.5, 0.5 + g3}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
    r[4] = {{0.5 - 0.5 * b, 0.5 - 0.5 * a, 0.5 + 0.5 * a, 0.5 + 0.5 * b}, {wb, wa, wa, wb}};
    return r;
  }();
  if (n < 1 || n > 4) throw std::invalid_argument("gauss_line: unsupported point count " + std::to_string(n));
  return rules[n];
}

}  // namespace biot
