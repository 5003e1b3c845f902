#include "smod/weierstrass.hpp"

#include "smod/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace smod {

namespace {

constexpr int kLaurentOrder = 8; // tail corrected through G_16

/// Sum of d^e over divisors d of n.
double divisor_sigma(int n, int e) {
  double s = 0.0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0)
      s += std::pow(static_cast<double>(d), e);
  return s;
}

void gauss_reduce(Complex &w1, Complex &w2) {
  for (int guard = 0; guard < 1000; ++guard) {
    if (std::norm(w2) < std::norm(w1))
      std::swap(w1, w2);
    double m = std::round((w2 * std::conj(w1)).real() / std::norm(w1));
    if (m == 0.0)
      break;
    w2 -= m * w1;
  }
  if ((w2 / w1).imag() < 0)
    w2 = -w2;
}

} // namespace

WeierstrassP::WeierstrassP(const EllipticCurve &lattice, int terms)
    : lattice_(lattice), terms_(terms) {
  if (terms_ < 4)
    throw ModelError("p-function box must have at least 4 terms per side");
  omega1_ = Complex(1.0, 0.0);
  omega2_ = lattice_.tau();
  gauss_reduce(omega1_, omega2_);

  const double pi = std::numbers::pi;
  Complex tau = omega2_ / omega1_;
  Complex q = std::exp(Complex(0.0, 2.0 * pi) * tau);
  Complex e4(1.0), e6(1.0), qn(1.0);
  for (int n = 1; n <= 80; ++n) {
    qn *= q;
    if (std::abs(qn) < 1e-30)
      break;
    e4 += 240.0 * divisor_sigma(n, 3) * qn;
    e6 -= 504.0 * divisor_sigma(n, 5) * qn;
  }
  Complex g4 = std::pow(pi, 4) / 45.0 * e4 / std::pow(omega1_, 4);
  Complex g6 = 2.0 * std::pow(pi, 6) / 945.0 * e6 / std::pow(omega1_, 6);
  g2_ = 60.0 * g4;
  g3_ = 140.0 * g6;

  // Laurent coefficients c_k (index k), c_k = (2k-1) G_2k.
  laurent_.assign(kLaurentOrder + 1, Complex{});
  laurent_[2] = g2_ / 20.0;
  laurent_[3] = g3_ / 28.0;
  for (int k = 4; k <= kLaurentOrder; ++k) {
    Complex s{};
    for (int m = 2; m <= k - 2; ++m)
      s += laurent_[m] * laurent_[k - m];
    laurent_[k] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
  }

  const int n = terms_;
  points_.reserve(static_cast<std::size_t>((2 * n + 1) * (2 * n + 1) - 1));
  std::vector<Complex> box_sum(kLaurentOrder + 1, Complex{});
  for (int a = -n; a <= n; ++a) {
    for (int b = -n; b <= n; ++b) {
      if (a == 0 && b == 0)
        continue;
      Complex w = static_cast<double>(a) * omega1_ + static_cast<double>(b) * omega2_;
      points_.push_back(w);
      Complex inv2 = 1.0 / (w * w);
      inv_sq_.push_back(inv2);
      Complex pw = inv2 * inv2;
      for (int k = 2; k <= kLaurentOrder; ++k) {
        box_sum[k] += pw;
        pw *= inv2;
      }
    }
  }
  tail_.assign(kLaurentOrder + 1, Complex{});
  for (int k = 2; k <= kLaurentOrder; ++k)
    tail_[k] = laurent_[k] - (2.0 * k - 1.0) * box_sum[k];
}

Complex WeierstrassP::eisenstein(int k) const {
  if (k < 2 || k > kLaurentOrder)
    throw DomainError("Eisenstein index out of range");
  return laurent_[k] / (2.0 * k - 1.0);
}

Complex WeierstrassP::centre(Complex z) const {
  // coordinates in the reduced basis
  double det = (std::conj(omega1_) * omega2_).imag();
  double x = (std::conj(z) * omega2_).imag() / det;
  double y = (std::conj(omega1_) * z).imag() / det;
  x -= std::round(x);
  y -= std::round(y);
  return x * omega1_ + y * omega2_;
}

WeierstrassP::Value WeierstrassP::evaluate(Complex z) const {
  Complex zc = centre(z);
  if (std::abs(zc) < 1e-14 * std::abs(omega1_))
    return {P1Point::infinity(), P1Point::infinity()};

  double sp_re = 0.0, sp_im = 0.0;   // sum 1/(z-w)^2 - 1/w^2
  double sd_re = 0.0, sd_im = 0.0;   // sum 1/(z-w)^3
  const double zr = zc.real(), zi = zc.imag();
  const std::size_t count = points_.size();
  for (std::size_t i = 0; i < count; ++i) {
    double dr = zr - points_[i].real();
    double di = zi - points_[i].imag();
    double inv_n = 1.0 / (dr * dr + di * di);
    double ir = dr * inv_n, ii = -di * inv_n;         // 1/d
    double i2r = ir * ir - ii * ii, i2i = 2 * ir * ii; // 1/d^2
    sp_re += i2r - inv_sq_[i].real();
    sp_im += i2i - inv_sq_[i].imag();
    sd_re += i2r * ir - i2i * ii;
    sd_im += i2r * ii + i2i * ir;
  }
  Complex inv = 1.0 / zc;
  Complex p = inv * inv + Complex(sp_re, sp_im);
  Complex dp = -2.0 * inv * inv * inv - 2.0 * Complex(sd_re, sd_im);
  Complex z2 = zc * zc;
  Complex pw(1.0);   // z^(2k-4)
  for (int k = 2; k <= kLaurentOrder; ++k) {
    p += tail_[k] * pw * z2;
    dp += (2.0 * k - 2.0) * tail_[k] * pw * zc;
    pw *= z2;
  }
  return {P1Point::finite(p), P1Point::finite(dp)};
}

std::array<Complex, 3> WeierstrassP::half_period_values() const {
  Complex tau = lattice_.tau();
  return {value(0.5).value, value(tau / 2.0).value, value((1.0 + tau) / 2.0).value};
}

WeierstrassInverse::WeierstrassInverse(const EllipticCurve &lattice, int terms)
    : p_(lattice, terms) {
  grid_u_.reserve(kGrid * kGrid);
  grid_p_.reserve(kGrid * kGrid);
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      Complex u = lattice.point(static_cast<double>(i) / kGrid, static_cast<double>(j) / kGrid);
      grid_u_.push_back(u);
      grid_p_.push_back(p_.value(u));
    }
  }
}

bool WeierstrassInverse::newton(const P1Point &w, Complex &u, double &residual) const {
  const bool reciprocal = std::abs(w.value) > 1.0;
  const Complex inv_w = reciprocal ? 1.0 / w.value : Complex{};
  auto value = p_.evaluate(u);
  residual = chordal_distance(value.p, w);
  for (int iter = 0; iter < 200; ++iter) {
    if (residual <= 1e-15)
      return true;
    if (value.p.infinite) {
      u += 1e-3 * p_.lattice().point(1.0, 0.5);
      value = p_.evaluate(u);
      residual = chordal_distance(value.p, w);
      continue;
    }
    Complex f, df;
    if (reciprocal) {
      f = 1.0 / value.p.value - inv_w;
      df = -value.prime.value / (value.p.value * value.p.value);
    } else {
      f = value.p.value - w.value;
      df = value.prime.value;
    }
    if (std::abs(df) == 0.0) {
      u += 1e-7 * p_.lattice().point(1.0, 0.5);
      value = p_.evaluate(u);
      residual = chordal_distance(value.p, w);
      continue;
    }
    Complex step = f / df;
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      Complex trial = u - lambda * step;
      auto tv = p_.evaluate(trial);
      double tr = chordal_distance(tv.p, w);
      if (tr < residual) {
        u = trial;
        value = tv;
        residual = tr;
        improved = true;
        break;
      }
      lambda /= 2;
    }
    if (!improved)
      return residual <= 1e-11;
  }
  return residual <= 1e-11;
}

Complex WeierstrassInverse::solve(const P1Point &w) const {
  if (w.infinite)
    return Complex{};
  // best few seeds by chordal distance
  std::array<std::size_t, 4> best{};
  std::array<double, 4> dist;
  dist.fill(std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < grid_p_.size(); ++i) {
    double d = chordal_distance(grid_p_[i], w);
    for (std::size_t k = 0; k < best.size(); ++k) {
      if (d < dist[k]) {
        for (std::size_t m = best.size() - 1; m > k; --m) {
          best[m] = best[m - 1];
          dist[m] = dist[m - 1];
        }
        best[k] = i;
        dist[k] = d;
        break;
      }
    }
  }
  double residual = std::numeric_limits<double>::infinity();
  Complex last{};
  for (std::size_t k = 0; k < best.size(); ++k) {
    Complex u = grid_u_[best[k]];
    if (newton(w, u, residual))
      return u;
    last = u;
  }
  std::ostringstream msg;
  msg << "p-inverse did not converge for w = " << w << " (last iterate " << last
      << ", chordal residual " << residual << ")";
  throw NoConvergence(msg.str());
}

Complex WeierstrassInverse::solve_near(const P1Point &w, Complex seed) const {
  if (w.infinite)
    return Complex{};
  Complex u = seed;
  double residual = 0.0;
  if (newton(w, u, residual))
    return u;
  return solve(w);
}

} // namespace smod
