#ifndef SMOD_NSLATTICE_HPP
#define SMOD_NSLATTICE_HPP

#include "smod/rational.hpp"

#include <cstdint>
#include <vector>

namespace smod {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

/// Néron–Severi lattice with its intersection form. The form is checked
/// to be symmetric and negative semi-definite on construction.
class NSLattice {
public:
  NSLattice() = default;
  explicit NSLattice(IntMatrix gram);

  std::size_t rank() const { return gram_.size(); }
  const IntMatrix &gram() const { return gram_; }

  /// q(v) = v^T G v.
  std::int64_t form(const IntVector &v) const;

  /// Rank of the (degenerate) form.
  std::size_t form_rank() const { return form_rank_; }

  /// Unimodular U with U^T (-G) U = diag(A', 0), A' positive definite of
  /// size form_rank(). Columns past form_rank() span the radical.
  const IntMatrix &reduction() const { return reduction_; }
  const IntMatrix &reduction_inverse() const { return reduction_inverse_; }
  const IntMatrix &reduced_form() const { return reduced_; }

  /// Cholesky factors of the reduced form, A' = L D L^T with L unit upper
  /// triangular; computed once because every coset search starts from them.
  const std::vector<std::vector<double>> &cholesky_upper() const { return chol_mu_; }
  const std::vector<double> &cholesky_diagonal() const { return chol_diag_; }

private:
  IntMatrix gram_;
  IntMatrix reduction_;
  IntMatrix reduction_inverse_;
  IntMatrix reduced_;
  std::size_t form_rank_ = 0;
  std::vector<std::vector<double>> chol_mu_;
  std::vector<double> chol_diag_;
};

struct ChernData {
  IntVector c1;
  std::int64_t c2 = 0;
};

/// Minimisers of v -> -q(v) over the coset c1 + 2 NS(X).
struct CosetMinimum {
  std::int64_t value = 0;           ///< min of -q(v)
  std::vector<IntVector> minimisers; ///< all minimisers with radical part fixed to that of c1, sorted
};

/// Exact enumeration (Fincke–Pohst on the positive part, exact integer leaves).
CosetMinimum coset_minimum(const NSLattice &ns, const IntVector &c1);

/// m(2, c1) = -1/2 max_mu q(c1/2 - mu) = (1/8) min_{v in c1 + 2NS} -q(v).
Rational m_two(const NSLattice &ns, const IntVector &c1);

/// Class d in c1 + 2NS with -q(d/2)/2 = m(2,c1); ties broken by the
/// lexicographically smallest coordinate vector.
IntVector select_delta_class(const NSLattice &ns, const IntVector &c1);

/// Delta(2, c1, c2) = (c2 - q(c1)/4) / 2.
Rational discriminant_numeric(const NSLattice &ns, const ChernData &c);

/// Bănică–Le Potier: a filtrable bundle exists iff Delta >= m(2, c1).
bool filtrable_exists(const NSLattice &ns, const ChernData &c);

struct C2Range {
  Rational c2_min;    ///< -2 m(2, c1)
  Rational band_low;  ///< every bundle with c2 in [band_low, band_high) is unfiltrable, hence stable
  Rational band_high; ///< always 0
  bool band_empty() const { return !(band_low < band_high); }
  bool in_band(std::int64_t c2) const { return band_low <= Rational(c2) && Rational(c2) < band_high; }
};

C2Range c2_admissible_range(const NSLattice &ns, const IntVector &c1);

} // namespace smod

#endif
