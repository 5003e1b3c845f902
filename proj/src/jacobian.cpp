#include "smod/jacobian.hpp"

#include "smod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace smod {

namespace {

/// Nearest integer to x, or nullopt when x is farther than tol from one.
std::optional<std::int64_t> near_integer(double x, double tol) {
  double r = std::round(x);
  if (std::abs(x - r) > tol)
    return std::nullopt;
  return static_cast<std::int64_t>(r);
}

struct AffineData {
  Complex u;
  Complex c;
};

AffineData affine_data(const Section &s) {
  if (const auto *k = std::get_if<ConstantSection>(&s))
    return {Complex{}, k->lambda.z()};
  const auto &a = std::get<AffineSection>(s);
  return {a.u, a.c.z()};
}

const EllipticCurve &section_curve(const Section &s) {
  if (const auto *k = std::get_if<ConstantSection>(&s))
    return k->lambda.curve();
  return std::get<AffineSection>(s).c.curve();
}

} // namespace

void validate_section(const Section &section, const SurfaceModel &x) {
  if (!(section_curve(section) == x.fibre()))
    throw ModelError("section does not take values in the fibre torus of X");
  const auto *a = std::get_if<AffineSection>(&section);
  if (!a)
    return;
  if (x.base_genus() != 1)
    throw ModelError("non-constant sections exist only over an elliptic base");
  const EllipticCurve &fibre = x.fibre();
  Complex tau_b = x.base_curve()->tau();
  if (!fibre.is_lattice_point(a->u) || !fibre.is_lattice_point(a->u * tau_b))
    throw ModelError("affine section slope does not map the base lattice into the fibre lattice");
}

Complex chart_centre(const Involution &inv, const BasePoint &b) {
  if (const auto *k = std::get_if<ConstantSection>(&inv.delta_section))
    return k->lambda.z() / 2.0;
  const auto &a = std::get<AffineSection>(inv.delta_section);
  if (b.infinite)
    throw DomainError("affine section evaluated at a point at infinity");
  return (a.u * b.value + a.c.z()) / 2.0;
}

TorusPoint involution_apply(const Involution &inv, const BasePoint &b, const TorusPoint &lambda) {
  return evaluate(inv.delta_section, b) - lambda;
}

P1Point eta_project(const WeierstrassP &wp, const Involution &inv, const BasePoint &b,
                    const TorusPoint &lambda) {
  return wp.value(lambda.z() - chart_centre(inv, b));
}

TorusPair eta_fibre_lift(const WeierstrassInverse &inverse, const Involution &inv,
                         const BasePoint &b, const P1Point &w) {
  const EllipticCurve &curve = inverse.p().lattice();
  Complex s = chart_centre(inv, b);
  Complex u = inverse.solve(w);
  return {torus_reduce(s + u, curve), torus_reduce(s - u, curve)};
}

IntersectionCount section_intersections(const Section &s1, const Section &s2, const SurfaceModel &x) {
  validate_section(s1, x);
  validate_section(s2, x);
  AffineData a = affine_data(s1);
  AffineData b = affine_data(s2);
  const EllipticCurve &fibre = x.fibre();
  Complex du = a.u - b.u;
  bool offsets_equal = fibre.is_lattice_point(a.c - b.c);
  if (std::abs(du) <= kPointTolerance) {
    if (offsets_equal)
      return {true, 0};
    return {false, 0};
  }
  // Only reachable for g = 1: validate_section rejects affine data elsewhere.
  Complex tau_b = x.base_curve()->tau();
  auto [p, r] = fibre.coordinates(du);
  auto [q, s] = fibre.coordinates(du * tau_b);
  auto m00 = near_integer(p, kPointTolerance);
  auto m10 = near_integer(r, kPointTolerance);
  auto m01 = near_integer(q, kPointTolerance);
  auto m11 = near_integer(s, kPointTolerance);
  if (!m00 || !m10 || !m01 || !m11)
    throw ModelError("section slopes are not compatible with the base and fibre lattices");
  std::int64_t det = *m00 * *m11 - *m01 * *m10;
  return {false, det < 0 ? -det : det};
}

std::int64_t bisection_genus(const Rational &discriminant, int base_genus) {
  Rational genus = Rational(4) * discriminant + Rational(2 * base_genus - 1);
  if (!is_integer(genus) || genus < Rational(0))
    throw DomainError("4*Delta + 2g - 1 = " + to_string(genus) + " is not a non-negative integer");
  return genus.numerator();
}

std::int64_t riemann_hurwitz_check(int base_genus, std::int64_t branch_count) {
  if (branch_count < 0 || branch_count % 2 != 0)
    throw DomainError("a double cover needs an even, non-negative number of branch points");
  return 2 * static_cast<std::int64_t>(base_genus) - 1 + branch_count / 2;
}

// ---------------------------------------------------------------------------

namespace {

int rational_map_degree(const RationalMap &m) {
  return std::max(degree(m.numerator), degree(m.denominator));
}

} // namespace

void validate_ruled_section(const RuledSection &section) {
  if (const auto *m = std::get_if<RationalMap>(&section)) {
    if (degree(m->denominator) < 0)
      throw ModelError("rational map has a zero denominator");
    if (degree(m->numerator) < 0)
      return; // the constant map 0
    auto num_roots = roots(m->numerator);
    auto den_roots = roots(m->denominator);
    for (Complex a : num_roots)
      for (Complex b : den_roots)
        if (std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a)))
          throw ModelError("numerator and denominator of a rational map share a root");
    return;
  }
  if (const auto *s = std::get_if<SampledMap>(&section)) {
    if (s->degree < 0)
      throw ModelError("sampled section has negative degree");
    for (const auto &loop : s->loops)
      if (loop.size() < 2)
        throw ModelError("each sampled loop needs at least two samples");
    return;
  }
  if (std::get<AbstractSection>(section).degree < 0)
    throw ModelError("section of the ruled surface has negative degree");
}

int ruled_degree(const RuledSection &section) {
  return std::visit(
      [](const auto &s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RationalMap>)
          return rational_map_degree(s);
        else
          return s.degree;
      },
      section);
}

P1Point evaluate(const RationalMap &map, const BasePoint &b) {
  if (b.infinite) {
    Polynomial num = trimmed(map.numerator);
    Polynomial den = trimmed(map.denominator);
    int n = rational_map_degree(map);
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    if (dd < n)
      return P1Point::infinity();
    if (dn < n)
      return P1Point::finite(Complex{});
    return P1Point::finite(num.back() / den.back());
  }
  Complex d = evaluate(map.denominator, b.value);
  Complex n = evaluate(map.numerator, b.value);
  if (d == Complex{})
    return P1Point::infinity();
  return P1Point::finite(n / d);
}

bool numerical_class_check(const GraphDivisor &graph, std::int64_t c2) {
  std::int64_t total = ruled_degree(graph.section);
  for (const auto &v : graph.vertical)
    total += v.multiplicity;
  return total == c2;
}

// ---------------------------------------------------------------------------
// Monodromy tracking

namespace {

/// Outcome of following the preimage pair around one closed loop.
enum class LoopOutcome { Trivial, Swapped, Ambiguous };

struct Tracker {
  const WeierstrassInverse &inverse;
  const Involution &inv;

  /// Follows lambda(b) = centre(b) + u(b) continuously along the samples and
  /// reports whether it returns to itself or to its involution partner.
  /// `lifted` receives the continuous lift of lambda at each sample.
  LoopOutcome follow(const std::vector<MapSample> &samples, std::vector<Complex> *lifted,
                     std::string &why) const {
    const WeierstrassP &wp = inverse.p();
    const double scale = std::abs(wp.centre(wp.lattice().point(0.5, 0.5))) +
                         std::abs(wp.centre(wp.lattice().point(0.5, 0.0)));
    Complex u = inverse.solve(samples.front().w);
    Complex start_lambda = chart_centre(inv, samples.front().b) + u;
    if (lifted)
      lifted->assign(1, start_lambda);
    for (std::size_t k = 1; k < samples.size(); ++k) {
      Complex next = inverse.solve_near(samples[k].w, u);
      // nearest of the translates of +next and -next to the previous u
      Complex plus = u + wp.centre(next - u);
      Complex minus = u + wp.centre(-next - u);
      double dp = std::abs(plus - u);
      double dm = std::abs(minus - u);
      double near = std::min(dp, dm), far = std::max(dp, dm);
      if (near > 0.15 * scale || far < 4.0 * near) {
        std::ostringstream msg;
        msg << "tracking lost at sample " << k << " (step " << near << " vs " << far
            << "); densify the loop or move it away from branch points";
        why = msg.str();
        return LoopOutcome::Ambiguous;
      }
      u = dp <= dm ? plus : minus;
      if (lifted)
        lifted->push_back(chart_centre(inv, samples[k].b) + u);
    }
    const EllipticCurve &curve = wp.lattice();
    Complex end_centre = chart_centre(inv, samples.back().b);
    TorusPoint start = torus_reduce(start_lambda, curve);
    TorusPoint end = torus_reduce(end_centre + u, curve);
    TorusPoint partner = torus_reduce(end_centre - u, curve);
    double d_same = torus_distance(start, end);
    double d_swap = torus_distance(start, partner);
    const double tol = 1e-6;
    if (d_same <= tol && d_swap > tol)
      return LoopOutcome::Trivial;
    if (d_swap <= tol && d_same > tol)
      return LoopOutcome::Swapped;
    std::ostringstream msg;
    msg << "loop end is not resolved (distance to start " << d_same << ", to partner " << d_swap
        << ")";
    why = msg.str();
    return LoopOutcome::Ambiguous;
  }
};

std::vector<MapSample> circle_samples(const RationalMap &map, Complex centre, double radius,
                                      int points) {
  std::vector<MapSample> out;
  out.reserve(static_cast<std::size_t>(points) + 1);
  for (int k = 0; k <= points; ++k) {
    double angle = 2.0 * std::numbers::pi * k / points + 0.1;
    BasePoint b = P1Point::finite(centre + std::polar(radius, angle));
    out.push_back({b, evaluate(map, b)});
  }
  return out;
}

/// Finite points of B where the map meets e1, e2, e3 or infinity.
std::vector<RootCluster> special_points(const RationalMap &map, const WeierstrassP &wp) {
  std::vector<RootCluster> all;
  for (Complex e : wp.half_period_values()) {
    Polynomial p = trimmed(map.numerator - e * map.denominator);
    if (degree(p) >= 1) {
      auto c = clustered_roots(p, 1e-4);
      all.insert(all.end(), c.begin(), c.end());
    }
  }
  if (degree(map.denominator) >= 1) {
    auto c = clustered_roots(map.denominator, 1e-4);
    all.insert(all.end(), c.begin(), c.end());
  }
  return all;
}

PullbackResult pullback_rational(const RationalMap &map, const Involution &inv,
                                 const WeierstrassInverse &inverse, const SurfaceModel &x,
                                 const MonodromyOptions &options) {
  if (x.base_genus() != 0)
    throw ModelError("rational-map sections describe the ruled surface over P^1 only");
  PullbackResult result;
  if (rational_map_degree(map) == 0) {
    P1Point w = evaluate(map, P1Point::finite(Complex{}));
    TorusPair pair = eta_fibre_lift(inverse, inv, P1Point::finite(Complex{}), w);
    result.status = PullbackStatus::Reducible;
    result.bisection = ReducibleBisection{ConstantSection{pair.first}, ConstantSection{pair.second}};
    result.diagnostics = "constant map lifts to two constant sections";
    return result;
  }

  auto points = special_points(map, inverse.p());
  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      separation = std::min(separation, std::abs(points[i].centre - points[j].centre));
  if (!std::isfinite(separation))
    separation = 1.0;
  const double radius = 0.3 * separation;

  Tracker tracker{inverse, inv};
  std::string last_problem;
  for (const auto &p : points) {
    auto samples = circle_samples(map, p.centre, radius, options.loop_points);
    std::string why;
    LoopOutcome outcome;
    try {
      outcome = tracker.follow(samples, nullptr, why);
    } catch (const NoConvergence &e) {
      outcome = LoopOutcome::Ambiguous;
      why = e.what();
    }
    ++result.loops_tracked;
    if (outcome == LoopOutcome::Swapped)
      ++result.nontrivial_loops;
    else if (outcome == LoopOutcome::Ambiguous)
      last_problem = why;
  }
  std::ostringstream msg;
  msg << result.loops_tracked << " loops tracked, " << result.nontrivial_loops
      << " with nontrivial monodromy";
  if (!last_problem.empty())
    msg << "; " << last_problem;
  result.diagnostics = msg.str();
  if (result.nontrivial_loops > 0) {
    result.status = PullbackStatus::Irreducible;
    result.bisection = IrreducibleBisection{map};
  }
  return result;
}

/// Fits lambda(b) = u*b + c to the continuous lifts gathered along the loops.
std::optional<AffineSection> fit_affine(const std::vector<std::vector<MapSample>> &loops,
                                        const std::vector<std::vector<Complex>> &lifts,
                                        const EllipticCurve &curve) {
  std::optional<Complex> slope;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    Complex db = loops[i].back().b.value - loops[i].front().b.value;
    if (std::abs(db) < 1e-12)
      continue;
    Complex u = (lifts[i].back() - lifts[i].front()) / db;
    if (slope && std::abs(*slope - u) > 1e-6 * (1.0 + std::abs(u)))
      return std::nullopt;
    slope = u;
  }
  if (!slope)
    slope = Complex{};
  Complex c = lifts.front().front() - *slope * loops.front().front().b.value;
  for (std::size_t i = 0; i < loops.size(); ++i)
    for (std::size_t k = 0; k < loops[i].size(); ++k) {
      Complex predicted = *slope * loops[i][k].b.value + c;
      if (!curve.is_lattice_point(predicted - lifts[i][k], 1e-6))
        return std::nullopt;
    }
  return AffineSection{*slope, torus_reduce(c, curve)};
}

PullbackResult pullback_sampled(const SampledMap &map, const Involution &inv,
                                const WeierstrassInverse &inverse, const SurfaceModel &x) {
  PullbackResult result;
  Tracker tracker{inverse, inv};
  std::vector<std::vector<Complex>> lifts;
  std::string last_problem;
  bool all_trivial = true;
  for (const auto &loop : map.loops) {
    std::vector<Complex> lifted;
    std::string why;
    LoopOutcome outcome;
    try {
      outcome = tracker.follow(loop, &lifted, why);
    } catch (const NoConvergence &e) {
      outcome = LoopOutcome::Ambiguous;
      why = e.what();
    }
    ++result.loops_tracked;
    if (outcome == LoopOutcome::Swapped)
      ++result.nontrivial_loops;
    if (outcome != LoopOutcome::Trivial) {
      all_trivial = false;
      if (!why.empty())
        last_problem = why;
    }
    lifts.push_back(std::move(lifted));
  }
  std::ostringstream msg;
  msg << result.loops_tracked << " loops tracked, " << result.nontrivial_loops
      << " with nontrivial monodromy";
  if (result.nontrivial_loops > 0) {
    result.status = PullbackStatus::Irreducible;
    result.bisection = IrreducibleBisection{map};
  } else if (all_trivial && !map.loops.empty()) {
    const EllipticCurve &curve = inverse.p().lattice();
    if (auto s1 = fit_affine(map.loops, lifts, curve)) {
      Section first = *s1;
      bool valid = true;
      try {
        validate_section(first, x);
      } catch (const ModelError &) {
        valid = false;
      }
      if (valid) {
        Section second = subtract(inv.delta_section, first);
        result.status = PullbackStatus::Reducible;
        result.bisection = ReducibleBisection{first, second};
        msg << "; lift fits an affine section";
      } else {
        msg << "; affine fit is not lattice compatible";
      }
    } else {
      msg << "; lift is not affine along the loops";
    }
  }
  if (!last_problem.empty())
    msg << "; " << last_problem;
  result.diagnostics = msg.str();
  return result;
}

} // namespace

PullbackResult graph_pullback(const RuledSection &section, const Involution &inv,
                              const WeierstrassInverse &inverse, const SurfaceModel &x,
                              const MonodromyOptions &options) {
  validate_ruled_section(section);
  validate_section(inv.delta_section, x);
  if (const auto *m = std::get_if<RationalMap>(&section))
    return pullback_rational(*m, inv, inverse, x, options);
  if (const auto *s = std::get_if<SampledMap>(&section))
    return pullback_sampled(*s, inv, inverse, x);
  PullbackResult result;
  result.diagnostics = "only the numerical class of the section is known";
  return result;
}

std::vector<BranchPoint> odd_branch_points(const RationalMap &map, const WeierstrassP &wp) {
  validate_ruled_section(map);
  const int n = rational_map_degree(map);
  std::vector<BranchPoint> out;
  if (n == 0)
    return out;
  auto collect = [&](const Polynomial &p) {
    Polynomial t = trimmed(p);
    int d = static_cast<int>(t.size()) - 1;
    if (d >= 1)
      for (const auto &c : clustered_roots(t, 1e-4))
        if (c.multiplicity % 2 == 1)
          out.push_back({P1Point::finite(c.centre), c.multiplicity});
    int at_infinity = n - d;
    if (at_infinity % 2 == 1)
      out.push_back({P1Point::infinity(), at_infinity});
  };
  for (Complex e : wp.half_period_values())
    collect(map.numerator - e * map.denominator);
  collect(map.denominator);
  return out;
}

} // namespace smod
