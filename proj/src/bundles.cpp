#include "smod/bundles.hpp"

#include "smod/errors.hpp"

#include <algorithm>
#include <sstream>

namespace smod {

int JumpDescriptor::multiplicity() const {
  int mu = 0;
  for (int h : sequence)
    mu += h;
  return mu;
}

void validate_jump(const JumpDescriptor &jump) {
  if (jump.length < 1)
    throw ModelError("jump length must be at least 1");
  if (static_cast<int>(jump.sequence.size()) != jump.length)
    throw ModelError("jumping sequence has " + std::to_string(jump.sequence.size()) +
                     " entries but the jump has length " + std::to_string(jump.length));
  for (std::size_t i = 0; i < jump.sequence.size(); ++i) {
    if (jump.sequence[i] < 1)
      throw ModelError("jump heights must be at least 1");
    if (i > 0 && jump.sequence[i] > jump.sequence[i - 1])
      throw ModelError("jumping sequence must be non-increasing");
  }
  if (jump.fibre_multiplicity && *jump.fibre_multiplicity < 2)
    throw ModelError("a multiple fibre has multiplicity at least 2");
}

namespace {

std::vector<VerticalComponent> vertical_from_jumps(const std::vector<JumpDescriptor> &jumps) {
  std::vector<VerticalComponent> out;
  for (const auto &j : jumps) {
    validate_jump(j);
    for (const auto &v : out)
      if (same_point(v.base_point, j.base_point))
        throw ModelError("two jumps over the same fibre");
    out.push_back({j.base_point, j.multiplicity()});
  }
  return out;
}

IntVector difference(const IntVector &a, const IntVector &b, std::int64_t scale_b) {
  if (a.size() != b.size())
    throw ModelError("Néron–Severi classes of different ranks");
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] - scale_b * b[i];
  return out;
}

std::vector<JumpDescriptor>::const_iterator find_jump(const BundleDescriptor &e, const BasePoint &at) {
  return std::find_if(e.jumps.begin(), e.jumps.end(),
                      [&](const JumpDescriptor &j) { return same_point(j.base_point, at); });
}

} // namespace

BundleDescriptor make_filtrable(const LineBundleModel &determinant, const IntVector &determinant_class,
                                std::int64_t c2, const ExtensionData &extension,
                                std::vector<JumpDescriptor> jumps) {
  BundleDescriptor e;
  e.determinant = determinant;
  e.determinant_class = determinant_class;
  e.c2 = c2;
  e.cover.vertical = vertical_from_jumps(jumps);
  e.cover.horizontal = ReducibleBisection{extension.destab_section, extension.other_section};
  e.extension = extension;
  e.jumps = std::move(jumps);
  return e;
}

BundleDescriptor make_unfiltrable(const LineBundleModel &determinant, const IntVector &determinant_class,
                                  std::int64_t c2, const RuledSection &graph_section,
                                  std::vector<JumpDescriptor> jumps) {
  BundleDescriptor e;
  e.determinant = determinant;
  e.determinant_class = determinant_class;
  e.c2 = c2;
  e.cover.vertical = vertical_from_jumps(jumps);
  e.cover.horizontal = IrreducibleBisection{graph_section};
  e.jumps = std::move(jumps);
  return e;
}

Rational discriminant(const BundleDescriptor &e, const NSLattice &ns) {
  return (Rational(e.c2) - Rational(ns.form(e.determinant_class), 4)) / Rational(2);
}

Rational jump_free_discriminant(const BundleDescriptor &e, const NSLattice &ns) {
  std::int64_t mu = 0;
  for (const auto &j : e.jumps)
    mu += j.multiplicity();
  return discriminant(e, ns) - Rational(mu, 2);
}

Rational delta_from_extension(const IntVector &delta_class, const IntVector &d_class, const NSLattice &ns) {
  return Rational(-ns.form(difference(delta_class, d_class, 2)), 8);
}

Rational nu_invariant(const BundleDescriptor &e) {
  Rational nu(0);
  for (const auto &j : e.jumps) {
    if (j.fibre_multiplicity)
      nu += Rational(j.length, *j.fibre_multiplicity);
    else
      nu += Rational(j.length);
  }
  return nu;
}

BundleDescriptor allowable_modification(const BundleDescriptor &e, const BasePoint &at,
                                        const SurfaceModel &x) {
  auto it = find_jump(e, at);
  if (it == e.jumps.end())
    throw DomainError("no jump over the requested fibre");
  validate_jump(*it);
  auto fibre = x.multiple_fibre_at(at);
  if (fibre.has_value() != it->fibre_multiplicity.has_value() ||
      (fibre && x.multiple_fibres()[*fibre].multiplicity != *it->fibre_multiplicity))
    throw ModelError("jump fibre type does not match the surface");

  BundleDescriptor out = e;
  auto idx = static_cast<std::size_t>(it - e.jumps.begin());
  JumpDescriptor &jump = out.jumps[idx];
  const int h0 = jump.sequence.front();
  out.c2 -= h0;
  if (fibre)
    out.determinant.fibre_coeffs.at(*fibre) -= 1;
  else
    out.determinant.base_chern -= 1;

  for (auto v = out.cover.vertical.begin(); v != out.cover.vertical.end(); ++v) {
    if (same_point(v->base_point, at)) {
      v->multiplicity -= h0;
      if (v->multiplicity <= 0)
        out.cover.vertical.erase(v);
      break;
    }
  }
  jump.sequence.erase(jump.sequence.begin());
  jump.length -= 1;
  if (jump.length == 0)
    out.jumps.erase(out.jumps.begin() + static_cast<std::ptrdiff_t>(idx));
  return out;
}

BundleDescriptor remove_jump(const BundleDescriptor &e, const BasePoint &at, const SurfaceModel &x) {
  auto it = find_jump(e, at);
  if (it == e.jumps.end())
    throw DomainError("no jump over the requested fibre");
  BundleDescriptor out = e;
  for (int step = it->length; step > 0; --step)
    out = allowable_modification(out, at, x);
  return out;
}

BundleDescriptor remove_all_jumps(const BundleDescriptor &e, const SurfaceModel &x) {
  BundleDescriptor out = e;
  while (!out.jumps.empty())
    out = remove_jump(out, out.jumps.front().base_point, x);
  return out;
}

std::string PsiFibre::description() const {
  switch (kind) {
  case PsiFibreKind::AutSL2:
    return "Aut_SL2(W|_T)";
  case PsiFibreKind::PicTimesAut:
    return "Pic^{" + std::to_string(pic_degree) + "}(T) x Aut";
  case PsiFibreKind::PicOnly:
    break;
  }
  return "Pic^{" + std::to_string(pic_degree) + "}(T)";
}

PsiFibre psi_fibre_classify(std::int64_t c2, int h0, std::optional<int> h1, int l) {
  std::ostringstream why;
  if (h0 < 1 || l < 0)
    why << "heights must be positive and the length non-negative";
  else if (c2 < h0)
    why << "c2 = " << c2 << " is smaller than the removed height h0 = " << h0;
  else if (h1.has_value() != (l > 0))
    why << "h1 must be given exactly when the remaining jump length l is positive";
  else if (h1 && *h1 < 1)
    why << "heights must be positive";
  else if (h1 && *h1 > h0)
    why << "h1 = " << *h1 << " exceeds h0 = " << h0 << "; jumping sequences are non-increasing";
  if (!why.str().empty())
    throw DomainError("no Psi fibre case applies: " + why.str());

  if (c2 == h0 || l == 0)
    return {PsiFibreKind::PicOnly, -c2};
  if (*h1 == h0)
    return {PsiFibreKind::AutSL2, 0};
  return {PsiFibreKind::PicTimesAut, -static_cast<std::int64_t>(h0)};
}

std::vector<PsiFibre> psi_tower(std::int64_t c2, const std::vector<int> &sequence) {
  JumpDescriptor probe{P1Point::finite(0.0), std::nullopt, static_cast<int>(sequence.size()), sequence};
  validate_jump(probe);
  std::vector<PsiFibre> out;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    int remaining = static_cast<int>(sequence.size() - k - 1);
    std::optional<int> h1;
    if (remaining > 0)
      h1 = sequence[k + 1];
    out.push_back(psi_fibre_classify(c2, sequence[k], h1, remaining));
    c2 -= sequence[k];
  }
  return out;
}

namespace {

void partitions(int remaining, int largest, std::vector<int> &current,
                std::vector<std::vector<int>> &out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int h = std::min(remaining, largest); h >= 1; --h) {
    current.push_back(h);
    partitions(remaining - h, h, current, out);
    current.pop_back();
  }
}

} // namespace

std::vector<std::vector<int>> jumping_sequences(int mu) {
  if (mu < 1)
    throw DomainError("a jump has multiplicity at least 1");
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  partitions(mu, mu, current, out);
  return out;
}

std::string_view to_string(SplittingKind kind) {
  switch (kind) {
  case SplittingKind::SplitsEverywhere:
    return "splits-everywhere";
  case SplittingKind::SplitsOnFinitely:
    return "splits-on-finitely";
  case SplittingKind::NontrivialOnFinitely:
    break;
  }
  return "nontrivial-on-finitely";
}

// ---------------------------------------------------------------------------

namespace {

struct Collector {
  std::vector<Finding> findings;
  void add(std::string code, std::string message) {
    findings.push_back({std::move(code), std::move(message)});
  }
};

bool same_pair(const ReducibleBisection &pair, const Section &a, const Section &b) {
  return (same_section(pair.s1, a) && same_section(pair.s2, b)) ||
         (same_section(pair.s1, b) && same_section(pair.s2, a));
}

void check_jumps(const BundleDescriptor &e, const SurfaceModel &x, Collector &out) {
  for (const auto &j : e.jumps) {
    try {
      validate_jump(j);
    } catch (const ModelError &err) {
      out.add("jump-malformed", err.what());
      continue;
    }
    auto fibre = x.multiple_fibre_at(j.base_point);
    if (fibre.has_value() != j.fibre_multiplicity.has_value() ||
        (fibre && x.multiple_fibres()[*fibre].multiplicity != *j.fibre_multiplicity))
      out.add("jump-fibre-type", "jump fibre multiplicity does not match the surface");
  }
  // (d) vertical components of the cover correspond to jumps with mu = multiplicity
  std::vector<bool> used(e.cover.vertical.size(), false);
  for (const auto &j : e.jumps) {
    bool matched = false;
    for (std::size_t i = 0; i < e.cover.vertical.size(); ++i) {
      if (!used[i] && same_point(e.cover.vertical[i].base_point, j.base_point)) {
        used[i] = true;
        matched = true;
        if (e.cover.vertical[i].multiplicity != j.multiplicity())
          out.add("vertical-jump-mismatch",
                  "vertical multiplicity " + std::to_string(e.cover.vertical[i].multiplicity) +
                      " differs from the jump multiplicity " + std::to_string(j.multiplicity()));
      }
    }
    if (!matched)
      out.add("vertical-jump-mismatch", "a jump has no vertical component in the spectral cover");
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i])
      out.add("vertical-jump-mismatch", "a vertical component of the spectral cover has no jump");
  for (std::size_t i = 0; i < e.cover.vertical.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (same_point(e.cover.vertical[i].base_point, e.cover.vertical[k].base_point))
        out.add("vertical-duplicate", "vertical components over the same base point");
}

} // namespace

std::vector<Finding> consistency_check(const BundleDescriptor &e, const NSLattice &ns,
                                       const SurfaceModel &x) {
  Collector out;
  if (e.determinant_class.size() != ns.rank()) {
    out.add("class-rank", "determinant class does not have the rank of NS(X)");
    return out.findings;
  }
  if (e.determinant.fibre_coeffs.size() != x.fibre_count()) {
    out.add("determinant-fibres", "determinant needs one fibre coefficient per multiple fibre");
    return out.findings;
  }
  check_jumps(e, x, out);

  const auto *reducible = std::get_if<ReducibleBisection>(&e.cover.horizontal);
  if (!e.extension) {
    if (reducible)
      out.add("unfiltrable-cover",
              "a bundle without extension data must have an irreducible spectral cover");
    return out.findings;
  }
  const ExtensionData &ext = *e.extension;
  if (!reducible) {
    out.add("filtrable-cover", "a filtrable bundle has a spectral cover splitting into two sections");
    return out.findings;
  }
  try {
    validate_section(ext.destab_section, x);
    validate_section(ext.other_section, x);
  } catch (const ModelError &err) {
    out.add("section-invalid", err.what());
    return out.findings;
  }
  if (!same_pair(*reducible, ext.destab_section, ext.other_section))
    out.add("cover-extension-mismatch", "extension sections differ from the spectral cover");
  if (ext.destab_class.size() != ns.rank()) {
    out.add("class-rank", "destabilising class does not have the rank of NS(X)");
    return out.findings;
  }
  if (ext.splitting.n < 0)
    out.add("splitting-count", "splitting counts are non-negative");
  if (ext.destab_bundle && ext.destab_bundle->section &&
      !same_section(*ext.destab_bundle->section, ext.destab_section))
    out.add("destab-section", "destabilising bundle does not induce the first section");
  if (e.determinant.section) {
    Section sum = add(ext.destab_section, ext.other_section);
    if (!same_section(sum, *e.determinant.section))
      out.add("determinant-section", "the two sections do not add up to the determinant's section");
  }

  const Rational free_delta = jump_free_discriminant(e, ns);
  const Rational ext_delta = delta_from_extension(e.determinant_class, ext.destab_class, ns);
  if (free_delta != ext_delta)
    out.add("extension-discriminant", "Delta from the extension classes is " + to_string(ext_delta) +
                                          " but c2 and the jumps give " + to_string(free_delta));
  const Rational m = m_two(ns, e.determinant_class);
  if (free_delta < m)
    out.add("not-filtrable", "Delta = " + to_string(free_delta) + " is below m(2,c1) = " +
                                 to_string(m) + ", so no filtrable bundle exists");

  const bool coincident = same_section(ext.destab_section, ext.other_section);
  if (coincident) {
    // (a) a multiple section forces Delta = 0 for the jump-free bundle
    if (free_delta != Rational(0))
      out.add("multiple-section-discriminant",
              "Sigma_1 = Sigma_2 forces Delta = 0, found " + to_string(free_delta));
    if (ext.splitting.kind == SplittingKind::NontrivialOnFinitely)
      out.add("splitting-mode", "Sigma_1 = Sigma_2 admits no 'nontrivial on finitely many fibres' mode");
  } else {
    if (ext.splitting.kind == SplittingKind::SplitsOnFinitely)
      out.add("splitting-mode", "'splits on finitely many fibres' requires Sigma_1 = Sigma_2");
    // (b) distinct sections meet in 4 Delta points
    auto count = section_intersections(ext.destab_section, ext.other_section, x);
    if (Rational(count.count) != Rational(4) * free_delta)
      out.add("intersection-count", "Sigma_1 and Sigma_2 meet in " + std::to_string(count.count) +
                                        " points but 4 Delta = " + to_string(Rational(4) * free_delta));
    // (c) Delta = 0 forces global splitting
    if (free_delta == Rational(0) && ext.splitting.kind != SplittingKind::SplitsEverywhere &&
        ext.splitting.n != 0)
      out.add("trivial-discriminant-splitting", "Delta = 0 with distinct sections forces the "
                                                "extension to split on every fibre");
    if (ext.splitting.kind == SplittingKind::NontrivialOnFinitely &&
        Rational(ext.splitting.n) > Rational(4) * free_delta)
      out.add("nontrivial-count", "the extension is non-trivial on at most 4 Delta fibres");
  }

  // Cases with Sigma_1 = Sigma_2 pin deg K_1 by K_1^2 = delta' (x) H_+ (x) omega.
  if (coincident && ext.destab_bundle &&
      ext.splitting.kind != SplittingKind::NontrivialOnFinitely) {
    Degree pinned = (degree(e.determinant, x) - Degree(nu_invariant(e)) +
                     Degree(Rational(ext.splitting.kind == SplittingKind::SplitsOnFinitely
                                         ? ext.splitting.n
                                         : 0)) +
                     relative_dualising_degree(x))
                        .half();
    Degree declared = degree(*ext.destab_bundle, x);
    if (compare(pinned, declared).sign != 0)
      out.add("destab-degree-pin", "declared deg K_1 contradicts the value forced by K_1^2");
  }
  return out.findings;
}

} // namespace smod
