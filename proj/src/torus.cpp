#include "smod/torus.hpp"

#include "smod/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace smod {

namespace {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.0
  return r >= 1.0 ? 0.0 : r;
}

} // namespace

EllipticCurve::EllipticCurve(Complex tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()))
    throw ModelError("lattice generator must have positive imaginary part");
}

std::pair<double, double> EllipticCurve::coordinates(Complex z) const {
  double t = z.imag() / tau_.imag();
  double s = z.real() - t * tau_.real();
  return {s, t};
}

bool EllipticCurve::is_lattice_point(Complex z, double tol) const {
  auto [s, t] = coordinates(z);
  return std::abs(s - std::round(s)) <= tol && std::abs(t - std::round(t)) <= tol;
}

TorusPoint::TorusPoint(double s, double t, const EllipticCurve &curve)
    : s_(wrap_unit(s)), t_(wrap_unit(t)), curve_(curve) {}

TorusPoint TorusPoint::operator+(const TorusPoint &o) const {
  return TorusPoint(s_ + o.s_, t_ + o.t_, curve_);
}

TorusPoint TorusPoint::operator-(const TorusPoint &o) const {
  return TorusPoint(s_ - o.s_, t_ - o.t_, curve_);
}

TorusPoint TorusPoint::operator-() const { return TorusPoint(-s_, -t_, curve_); }

TorusPoint TorusPoint::half() const { return TorusPoint(s_ / 2, t_ / 2, curve_); }

TorusPoint torus_reduce(Complex z, const EllipticCurve &curve) {
  auto [s, t] = curve.coordinates(z);
  TorusPoint p(s, t, curve);
  // Settle on coordinates that survive the round trip through z() exactly,
  // so that reducing an already reduced point changes nothing.
  for (int i = 0; i < 8; ++i) {
    auto [s2, t2] = curve.coordinates(p.z());
    TorusPoint q(s2, t2, curve);
    if (q.s() == p.s() && q.t() == p.t())
      break;
    p = q;
  }
  return p;
}

double torus_distance(const TorusPoint &a, const TorusPoint &b) {
  double ds = a.s() - b.s();
  double dt = a.t() - b.t();
  ds -= std::round(ds);
  dt -= std::round(dt);
  double best = std::numeric_limits<double>::infinity();
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      best = std::min(best, std::abs(a.curve().point(ds + i, dt + j)));
  return best;
}

double chordal_distance(const P1Point &a, const P1Point &b) {
  if (a.infinite && b.infinite)
    return 0.0;
  if (a.infinite)
    return 1.0 / std::sqrt(1.0 + std::norm(b.value));
  if (b.infinite)
    return 1.0 / std::sqrt(1.0 + std::norm(a.value));
  return std::abs(a.value - b.value) /
         std::sqrt((1.0 + std::norm(a.value)) * (1.0 + std::norm(b.value)));
}

TorusPoint evaluate(const Section &section, const BasePoint &b) {
  if (const auto *c = std::get_if<ConstantSection>(&section))
    return c->lambda;
  const auto &aff = std::get<AffineSection>(section);
  if (b.infinite)
    throw DomainError("affine section evaluated at a point at infinity");
  return torus_reduce(aff.u * b.value + aff.c.z(), aff.c.curve());
}

namespace {

AffineSection as_affine(const Section &s) {
  if (const auto *c = std::get_if<ConstantSection>(&s))
    return AffineSection{Complex{}, c->lambda};
  return std::get<AffineSection>(s);
}

Section combine(const Section &a, const Section &b, int sign) {
  const auto *ca = std::get_if<ConstantSection>(&a);
  const auto *cb = std::get_if<ConstantSection>(&b);
  if (ca && cb)
    return ConstantSection{sign > 0 ? ca->lambda + cb->lambda : ca->lambda - cb->lambda};
  AffineSection x = as_affine(a);
  AffineSection y = as_affine(b);
  if (sign > 0)
    return AffineSection{x.u + y.u, x.c + y.c};
  return AffineSection{x.u - y.u, x.c - y.c};
}

} // namespace

Section add(const Section &a, const Section &b) { return combine(a, b, 1); }

Section subtract(const Section &a, const Section &b) { return combine(a, b, -1); }

bool same_section(const Section &a, const Section &b, double tol) {
  AffineSection x = as_affine(a);
  AffineSection y = as_affine(b);
  return std::abs(x.u - y.u) <= tol && same_point(x.c, y.c, tol);
}

std::ostream &operator<<(std::ostream &os, const TorusPoint &p) {
  return os << "[s=" << p.s() << ", t=" << p.t() << "]";
}

std::ostream &operator<<(std::ostream &os, const P1Point &p) {
  if (p.infinite)
    return os << "inf";
  return os << p.value;
}

} // namespace smod
