#include "smod/nslattice.hpp"

#include "smod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace smod {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ModelError("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw ModelError("integer overflow in lattice arithmetic");
  return r;
}

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    m[i][i] = 1;
  return m;
}

/// Column-reduce a (n x n) so that a*U = [H | 0]; keeps U^{-1} in sync.
std::size_t column_reduce(IntMatrix a, IntMatrix &u, IntMatrix &uinv) {
  const std::size_t n = a.size();
  u = identity(n);
  uinv = identity(n);

  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(a[r][j], a[r][k]);
      std::swap(u[r][j], u[r][k]);
    }
    std::swap(uinv[j], uinv[k]);
  };
  // col_k -= q * col_j
  auto sub_col = [&](std::size_t k, std::size_t j, std::int64_t q) {
    for (std::size_t r = 0; r < n; ++r) {
      a[r][k] = checked_add(a[r][k], -checked_mul(q, a[r][j]));
      u[r][k] = checked_add(u[r][k], -checked_mul(q, u[r][j]));
    }
    for (std::size_t c = 0; c < n; ++c)
      uinv[j][c] = checked_add(uinv[j][c], checked_mul(q, uinv[k][c]));
  };

  std::size_t pivot = 0;
  for (std::size_t row = 0; row < n && pivot < n; ++row) {
    for (std::size_t k = pivot + 1; k < n; ++k) {
      while (a[row][k] != 0) {
        if (a[row][pivot] == 0) {
          swap_cols(pivot, k);
          continue;
        }
        std::int64_t q = a[row][k] / a[row][pivot];
        sub_col(k, pivot, q);
        if (a[row][k] != 0)
          swap_cols(pivot, k);
      }
    }
    if (a[row][pivot] != 0)
      ++pivot;
  }
  return pivot;
}

IntVector mat_vec(const IntMatrix &m, const IntVector &v) {
  IntVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      out[i] = checked_add(out[i], checked_mul(m[i][j], v[j]));
  return out;
}

/// Exact LDL^T positivity test for a symmetric integer matrix.
bool positive_definite(const IntMatrix &a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = Rational(a[i][j]);
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] <= 0)
      return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j)
        m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

std::int64_t quadratic(const IntMatrix &a, const IntVector &v) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      acc += static_cast<__int128>(a[i][j]) * v[i] * v[j];
  if (acc > std::numeric_limits<std::int64_t>::max() ||
      acc < std::numeric_limits<std::int64_t>::min())
    throw ModelError("integer overflow evaluating the intersection form");
  return static_cast<std::int64_t>(acc);
}

/// Fincke–Pohst over z in Z^r for F(z) = (a + 2z)^T A (a + 2z), A positive definite,
/// written as F(z) = 4 * sum_i d_i (z_i + c_i + sum_{j>i} mu_ij (z_j + c_j))^2 with c = a/2.
class CosetEnumerator {
public:
  CosetEnumerator(const NSLattice &ns, const IntVector &offset, bool collect)
      : form_(ns.reduced_form()), mu_(ns.cholesky_upper()), diag_(ns.cholesky_diagonal()), offset_(offset),
        r_(form_.size()), collect_(collect), z_(r_, 0), v_(r_, 0) {
    center_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i)
      center_[i] = static_cast<double>(offset_[i]) / 2;
  }

  CosetMinimum run() {
    // Babai-style initial bound from the rounded point.
    for (std::size_t i = r_; i-- > 0;) {
      double shift = center_[i];
      for (std::size_t j = i + 1; j < r_; ++j)
        shift += mu_[i][j] * (z_[j] + center_[j]);
      z_[i] = static_cast<std::int64_t>(std::llround(-shift));
    }
    best_ = exact_value();
    std::fill(z_.begin(), z_.end(), 0);
    search(r_, 0.0);
    CosetMinimum out;
    out.value = best_;
    out.minimisers = std::move(found_);
    return out;
  }

private:
  /// F at the current z_, in exact integers; leaves a + 2z in v_.
  std::int64_t exact_value() {
    for (std::size_t i = 0; i < r_; ++i)
      v_[i] = checked_add(offset_[i], checked_mul(2, z_[i]));
    return quadratic(form_, v_);
  }

  double bound() const { return static_cast<double>(best_) * (1 + 1e-9) + 1e-6; }

  // level counts the coordinates still unassigned; partial is F of the assigned tail.
  void search(std::size_t level, double partial) {
    if (level == 0) {
      std::int64_t value = exact_value();
      if (value < best_) {
        best_ = value;
        found_.clear();
      }
      if (collect_ && value == best_)
        found_.push_back(v_);
      return;
    }
    std::size_t i = level - 1;
    double shift = center_[i];
    for (std::size_t j = i + 1; j < r_; ++j)
      shift += mu_[i][j] * (z_[j] + center_[j]);
    double room = (bound() - partial) / (4 * diag_[i]);
    if (room < 0)
      return;
    double radius = std::sqrt(room);
    auto lo = static_cast<std::int64_t>(std::ceil(-shift - radius - 1e-12));
    auto hi = static_cast<std::int64_t>(std::floor(-shift + radius + 1e-12));
    for (std::int64_t k = lo; k <= hi; ++k) {
      z_[i] = k;
      double y = k + shift;
      double next = partial + 4 * diag_[i] * y * y;
      if (next <= bound())
        search(level - 1, next);
    }
    z_[i] = 0;
  }

  const IntMatrix &form_;
  const std::vector<std::vector<double>> &mu_;
  const std::vector<double> &diag_;
  const IntVector &offset_;
  std::size_t r_;
  bool collect_;
  std::vector<double> center_;
  IntVector z_;
  IntVector v_;
  std::int64_t best_ = 0;
  std::vector<IntVector> found_;
};

/// Positive-part offset y_1..y_r of c1 in the reduced basis, and the full y.
IntVector reduced_coordinates(const NSLattice &ns, const IntVector &c1) {
  if (c1.size() != ns.rank())
    throw ModelError("c1 has wrong length for the NS lattice");
  return mat_vec(ns.reduction_inverse(), c1);
}

} // namespace

NSLattice::NSLattice(IntMatrix gram) : gram_(std::move(gram)) {
  const std::size_t n = gram_.size();
  for (const auto &row : gram_)
    if (row.size() != n)
      throw ModelError("gram matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram_[i][j] != gram_[j][i])
        throw ModelError("gram matrix must be symmetric");

  IntMatrix neg(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      neg[i][j] = -gram_[i][j];

  form_rank_ = column_reduce(neg, reduction_, reduction_inverse_);

  // B = U^T (-G) U; its radical block vanishes by construction.
  IntMatrix gu(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        gu[i][j] = checked_add(gu[i][j], checked_mul(neg[i][k], reduction_[k][j]));
  reduced_.assign(form_rank_, IntVector(form_rank_, 0));
  for (std::size_t i = 0; i < form_rank_; ++i)
    for (std::size_t j = 0; j < form_rank_; ++j)
      for (std::size_t k = 0; k < n; ++k)
        reduced_[i][j] = checked_add(reduced_[i][j], checked_mul(reduction_[k][i], gu[k][j]));

  if (!positive_definite(reduced_))
    throw ModelError("intersection form is not negative semi-definite");

  const std::size_t r = form_rank_;
  std::vector<std::vector<double>> m(r, std::vector<double>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      m[i][j] = static_cast<double>(reduced_[i][j]);
  chol_mu_.assign(r, std::vector<double>(r, 0));
  chol_diag_.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    chol_diag_[i] = m[i][i];
    for (std::size_t j = i + 1; j < r; ++j)
      chol_mu_[i][j] = m[i][j] / m[i][i];
    for (std::size_t k = i + 1; k < r; ++k)
      for (std::size_t j = k; j < r; ++j)
        m[k][j] -= chol_mu_[i][k] * m[i][j];
  }
}

std::int64_t NSLattice::form(const IntVector &v) const {
  if (v.size() != rank())
    throw ModelError("class has wrong length for the NS lattice");
  return quadratic(gram_, v);
}

CosetMinimum coset_minimum(const NSLattice &ns, const IntVector &c1) {
  const IntVector y = reduced_coordinates(ns, c1);
  const std::size_t r = ns.form_rank();
  const IntVector offset(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(r));

  CosetMinimum reduced;
  if (r == 0) {
    reduced.value = 0;
    reduced.minimisers.push_back({});
  } else {
    reduced = CosetEnumerator(ns, offset, true).run();
  }

  CosetMinimum out;
  out.value = reduced.value;
  for (const auto &part : reduced.minimisers) {
    IntVector full = y;
    std::copy(part.begin(), part.end(), full.begin());
    out.minimisers.push_back(mat_vec(ns.reduction(), full));
  }
  std::sort(out.minimisers.begin(), out.minimisers.end());
  return out;
}

Rational m_two(const NSLattice &ns, const IntVector &c1) {
  const IntVector y = reduced_coordinates(ns, c1);
  const std::size_t r = ns.form_rank();
  if (r == 0)
    return Rational(0);
  const IntVector offset(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(r));
  return Rational(CosetEnumerator(ns, offset, false).run().value, 8);
}

IntVector select_delta_class(const NSLattice &ns, const IntVector &c1) {
  return coset_minimum(ns, c1).minimisers.front();
}

Rational discriminant_numeric(const NSLattice &ns, const ChernData &c) {
  return Rational(1, 2) * (Rational(c.c2) - Rational(ns.form(c.c1), 4));
}

bool filtrable_exists(const NSLattice &ns, const ChernData &c) {
  return discriminant_numeric(ns, c) >= m_two(ns, c.c1);
}

C2Range c2_admissible_range(const NSLattice &ns, const IntVector &c1) {
  Rational m = m_two(ns, c1);
  return C2Range{-2 * m, -2 * m, Rational(0)};
}

} // namespace smod
