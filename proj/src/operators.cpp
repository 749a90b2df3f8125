#include "dyalab/operators.hpp"

#include <map>
#include <set>

#include "dyalab/errors.hpp"

namespace dyalab {
namespace {

struct HaarTerm {
  Rectangle rect;
  Scalar coeff;
};

std::vector<HaarTerm> haar_terms(const DyadicFunction& b, const char* who) {
  if (!b.is_pure_haar()) {
    throw DomainError(std::string(who) + ": symbol must be a finite linear combination of Haar functions");
  }
  std::vector<HaarTerm> out;
  for (const auto& [factors, c] : b.terms()) {
    HaarTerm t{{}, c};
    for (const auto& a : factors) t.rect.sides.push_back(a.iv);
    out.push_back(std::move(t));
  }
  return out;
}

Scalar length_inv(const Interval& i) { return Scalar(mpq_class(1 / i.length())); }

// h_J evaluated on a strict sub-interval I.
Scalar haar_on(const Interval& j, const Interval& i) { return *atoms::value_on(Atom::haar(j), i); }

Scalar pair(const Terms1& g, const Atom& a) {
  Scalar total;
  for (const auto& [x, c] : g) total += c * atoms::inner(x, a);
  return total;
}

Terms1 scaled(Terms1 t, const Scalar& s) {
  if (s.is_zero()) return {};
  for (auto& [a, c] : t) c *= s;
  return t;
}

void require_dim(const DyadicFunction& a, const DyadicFunction& b, const char* who) {
  if (a.dim() != b.dim()) throw DomainError(std::string(who) + ": dimension mismatch");
}

const char* piece_name(PieceKind k) {
  switch (k) {
    case PieceKind::B:
      return "B";
    case PieceKind::D0AfterRiesz:
      return "D0.I";
    case PieceKind::RieszAfterD0:
      return "I.D0";
    case PieceKind::DkAfterRiesz:
      return "D.I";
    case PieceKind::DTail:
      return "Dtail";
  }
  return "?";
}

Scalar piece_coefficient(const Piece& p, const ScaleParam& s) {
  switch (p.kind) {
    case PieceKind::B:
    case PieceKind::D0AfterRiesz:
      return Scalar(1);
    case PieceKind::RieszAfterD0:
      return Scalar(-1);
    case PieceKind::DkAfterRiesz:
      return Scalar(mpq_class(-pow_q(s.lambda(), p.k)));
    case PieceKind::DTail:
      return Scalar(mpq_class(-s.c()));
  }
  return Scalar(0);
}

// One-coordinate pieces for b = h_r and f = a, all with unit coefficient.
std::vector<std::pair<Piece, Terms1>> pieces_for(const Interval& r, const Atom& a, const ScaleParam& s,
                                                 int cutoff) {
  std::vector<std::pair<Piece, Terms1>> out;
  const Terms1 ia = atoms::riesz(a, s);
  auto emit = [&](Piece p, Terms1 t) {
    if (!t.empty()) out.emplace_back(p, std::move(t));
  };
  emit({PieceKind::B, 0}, scaled({{Atom::haar(r), Scalar(1)}}, pair(ia, Atom::indicator(r)) * length_inv(r)));
  emit({PieceKind::D0AfterRiesz, 0},
       scaled({{Atom::indicator(r), Scalar(1)}}, pair(ia, Atom::haar(r)) * length_inv(r)));
  emit({PieceKind::RieszAfterD0, 0},
       scaled(atoms::riesz(Atom::indicator(r), s), atoms::inner(a, Atom::haar(r)) * length_inv(r)));
  for (int k = 1; k <= cutoff; ++k) {
    const Interval rk = r.ancestor(k);
    emit({PieceKind::DkAfterRiesz, k},
         scaled({{Atom::haar(r), Scalar(1)}}, pair(ia, Atom::haar(rk)) * haar_on(rk, r)));
  }
  const Interval rk = r.ancestor(cutoff);
  const Scalar mean = atoms::inner(a, Atom::indicator(rk)) * length_inv(rk);
  emit({PieceKind::DTail, cutoff},
       scaled({{Atom::haar(r), Scalar(1)}}, mean * Scalar(s.length_pow_one_minus_alpha(r.scale))));
  return out;
}

}  // namespace

DyadicFunction riesz_apply(const ScaleParam& scale, const DyadicFunction& f, std::size_t coord) {
  return map_coordinate(f, coord, [&](const Atom& a) { return atoms::riesz(a, scale); });
}

DyadicFunction para_B(const DyadicFunction& b, const DyadicFunction& f) {
  require_dim(b, f, "para_B");
  DyadicFunction out(b.dim());
  for (const auto& t : haar_terms(b, "para_B")) {
    Scalar total;
    for (const auto& [factors, c] : f.terms()) {
      Scalar v = c;
      for (std::size_t j = 0; j < f.dim() && !v.is_zero(); ++j) {
        v *= atoms::inner(factors[j], Atom::indicator(t.rect.sides[j])) * length_inv(t.rect.sides[j]);
      }
      total += v;
    }
    out += DyadicFunction::haar(t.rect) * (t.coeff * total);
  }
  return out;
}

DyadicFunction para_B_adjoint(const DyadicFunction& b, const DyadicFunction& g) {
  require_dim(b, g, "para_B_adjoint");
  DyadicFunction out(b.dim());
  for (const auto& t : haar_terms(b, "para_B_adjoint")) {
    Scalar total;
    for (const auto& [factors, c] : g.terms()) {
      Scalar v = c;
      for (std::size_t j = 0; j < g.dim() && !v.is_zero(); ++j) {
        v *= atoms::inner(factors[j], Atom::haar(t.rect.sides[j])) * length_inv(t.rect.sides[j]);
      }
      total += v;
    }
    out += DyadicFunction::indicator(t.rect) * (t.coeff * total);
  }
  return out;
}

DyadicFunction para_C(const DyadicFunction& f1, const DyadicFunction& f2) {
  require_dim(f1, f2, "para_C");
  if (f1.dim() != 1) throw DomainError("para_C is defined in one dimension only");
  if (!f1.is_pure_haar() && f2.is_pure_haar()) return para_C(f2, f1);
  DyadicFunction out(1);
  for (const auto& t : haar_terms(f1, "para_C")) {
    const Interval& i = t.rect.sides[0];
    const Scalar c2 = inner_product(f2, DyadicFunction::haar(i));
    out += DyadicFunction::haar(i) * (t.coeff * c2 * atoms::haar_amplitude(i.scale));
  }
  return out;
}

DyadicFunction projection(int n, const DyadicFunction& f, std::size_t coord) {
  return map_coordinate(f, coord, [n](const Atom& a) {
    Terms1 out;
    if (a.kind == AtomKind::Haar) {
      if (a.iv.scale == n) out.emplace_back(a, Scalar(1));
      return out;
    }
    // Indicators and tails are constant on every interval that does not
    // strictly contain their base, so only the ancestor at scale n pairs.
    if (n <= a.iv.scale) return out;
    const Atom h = Atom::haar(a.iv.ancestor(n - a.iv.scale));
    Scalar c = atoms::inner(a, h);
    if (!c.is_zero()) out.emplace_back(h, std::move(c));
    return out;
  });
}

DyadicFunction para_D(int k, const DyadicFunction& b, const DyadicFunction& f, std::size_t coord) {
  require_dim(b, f, "para_D");
  if (k < 0) throw DomainError("para_D: shift must be nonnegative");
  if (coord >= b.dim()) throw DomainError("para_D: coordinate out of range");
  if (!b.is_pure_haar(coord)) throw DomainError("para_D: symbol needs finite Haar support in the pairing coordinate");
  const std::size_t d = b.dim();
  DyadicFunction out(d);
  std::vector<Terms1> per(d);
  for (const auto& [fb, cb] : b.terms()) {
    const Interval i = fb[coord].iv;
    const Interval ik = i.ancestor(k);
    for (const auto& [ff, cf] : f.terms()) {
      const Scalar p = atoms::inner(ff[coord], Atom::haar(ik));
      if (p.is_zero()) continue;
      bool zero = false;
      for (std::size_t j = 0; j < d && !zero; ++j) {
        if (j == coord) {
          per[j] = k == 0 ? Terms1{{Atom::indicator(i), length_inv(i)}} : Terms1{{Atom::haar(i), haar_on(ik, i)}};
        } else {
          per[j] = atoms::multiply(fb[j], ff[j]);
          zero = per[j].empty();
        }
      }
      if (!zero) add_tensor(out, cb * cf * p, per);
    }
  }
  return out;
}

DyadicFunction para_D_by_projections(int k, const DyadicFunction& b, const DyadicFunction& f, std::size_t coord) {
  require_dim(b, f, "para_D_by_projections");
  if (!b.is_pure_haar(coord)) throw DomainError("para_D: symbol needs finite Haar support in the pairing coordinate");
  std::set<int> scales;
  for (const auto& [factors, c] : b.terms()) scales.insert(factors[coord].iv.scale);
  DyadicFunction out(b.dim());
  for (int n : scales) out += multiply(projection(n, b, coord), projection(n + k, f, coord));
  return out;
}

int TensorParaSpec::total_shift() const {
  int v = 0;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!in_b[j]) v += shift[j];
  }
  return v;
}

std::string TensorParaSpec::str() const {
  std::string out = "E[";
  for (std::size_t j = 0; j < dim(); ++j) {
    if (j) out += ",";
    out += in_b[j] ? std::string("B") : "D" + std::to_string(shift[j]);
  }
  return out + "]";
}

DyadicFunction para_E(const TensorParaSpec& spec, const DyadicFunction& b, const DyadicFunction& f) {
  require_dim(b, f, "para_E");
  if (spec.in_b.size() != b.dim() || spec.shift.size() != b.dim()) {
    throw DomainError("para_E: block spec does not match dimension");
  }
  const std::size_t d = b.dim();
  DyadicFunction out(d);
  std::vector<Terms1> per(d);
  for (const auto& t : haar_terms(b, "para_E")) {
    for (const auto& [ff, cf] : f.terms()) {
      Scalar coeff = t.coeff * cf;
      for (std::size_t j = 0; j < d && !coeff.is_zero(); ++j) {
        const Interval& r = t.rect.sides[j];
        if (spec.in_b[j]) {
          coeff *= atoms::inner(ff[j], Atom::indicator(r)) * length_inv(r);
          per[j] = {{Atom::haar(r), Scalar(1)}};
        } else if (spec.shift[j] == 0) {
          coeff *= atoms::inner(ff[j], Atom::haar(r)) * length_inv(r);
          per[j] = {{Atom::indicator(r), Scalar(1)}};
        } else {
          const Interval rk = r.ancestor(spec.shift[j]);
          coeff *= atoms::inner(ff[j], Atom::haar(rk)) * haar_on(rk, r);
          per[j] = {{Atom::haar(r), Scalar(1)}};
        }
      }
      if (!coeff.is_zero()) add_tensor(out, coeff, per);
    }
  }
  return out;
}

DyadicFunction commutator_direct(const DyadicFunction& b, const std::vector<ScaleParam>& scales,
                                 const DyadicFunction& f) {
  require_dim(b, f, "commutator");
  const std::size_t d = b.dim();
  if (scales.size() != d) throw DomainError("commutator: one scale parameter per coordinate is required");
  DyadicFunction out(d);
  // sum over A of (-1)^{|A|} I_A (b . I_{A^c} f)
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    DyadicFunction g = f;
    for (std::size_t j = 0; j < d; ++j) {
      if (!(mask >> j & 1)) g = riesz_apply(scales[j], g, j);
    }
    g = multiply(b, g);
    int sign = 1;
    for (std::size_t j = 0; j < d; ++j) {
      if (mask >> j & 1) {
        g = riesz_apply(scales[j], g, j);
        sign = -sign;
      }
    }
    if (sign > 0) {
      out += g;
    } else {
      out -= g;
    }
  }
  return out;
}

std::string Piece::str() const {
  if (kind == PieceKind::DkAfterRiesz) return "D" + std::to_string(k) + ".I";
  if (kind == PieceKind::DTail) return "Dtail>" + std::to_string(k);
  return piece_name(kind);
}

std::string DecompositionFamily::label() const {
  std::string out;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    if (j) out += "|";
    out += pieces[j].str();
  }
  return out;
}

DecompositionReport commutator_decomposed(const DyadicFunction& b, const std::vector<ScaleParam>& scales,
                                          const DyadicFunction& f) {
  require_dim(b, f, "commutator_decomposed");
  const std::size_t d = b.dim();
  if (scales.size() != d) throw DomainError("commutator: one scale parameter per coordinate is required");
  const auto bterms = haar_terms(b, "commutator_decomposed");

  DecompositionReport report;
  report.cutoff.assign(d, 1);
  for (std::size_t j = 0; j < d; ++j) {
    int min_r = 0;
    int max_f = 0;
    bool have_r = false;
    bool have_f = false;
    for (const auto& t : bterms) {
      min_r = have_r ? std::min(min_r, t.rect.sides[j].scale) : t.rect.sides[j].scale;
      have_r = true;
    }
    for (const auto& [factors, c] : f.terms()) {
      max_f = have_f ? std::max(max_f, factors[j].iv.scale) : factors[j].iv.scale;
      have_f = true;
    }
    if (have_r && have_f) report.cutoff[j] = std::max(1, max_f - min_r + 1);
  }

  std::map<std::vector<Piece>, DyadicFunction> families;
  std::vector<std::vector<std::pair<Piece, Terms1>>> per(d);
  std::vector<std::size_t> pos(d);
  std::vector<Piece> key(d);
  std::vector<Terms1> factors(d);
  for (const auto& t : bterms) {
    for (const auto& [ff, cf] : f.terms()) {
      bool empty = false;
      for (std::size_t j = 0; j < d; ++j) {
        per[j] = pieces_for(t.rect.sides[j], ff[j], scales[j], report.cutoff[j]);
        empty = empty || per[j].empty();
      }
      if (empty) continue;
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        for (std::size_t j = 0; j < d; ++j) {
          key[j] = per[j][pos[j]].first;
          factors[j] = per[j][pos[j]].second;
        }
        auto it = families.try_emplace(key, DyadicFunction(d)).first;
        add_tensor(it->second, t.coeff * cf, factors);
        std::size_t j = d;
        while (j-- > 0) {
          if (++pos[j] < per[j].size()) break;
          pos[j] = 0;
        }
        if (j == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  report.direct = commutator_direct(b, scales, f);
  report.residual = report.direct;
  for (auto& [pieces, value] : families) {
    if (value.is_zero()) continue;
    Scalar coeff(1);
    for (std::size_t j = 0; j < d; ++j) coeff *= piece_coefficient(pieces[j], scales[j]);
    report.residual -= value * coeff;
    report.families.push_back({pieces, coeff, std::move(value)});
  }
  return report;
}

OperatorSpec OperatorSpec::riesz(const ScaleParam& s, std::size_t coord) {
  OperatorSpec o;
  o.kind = Kind::Riesz;
  o.scales = {s};
  o.coord = coord;
  return o;
}

OperatorSpec OperatorSpec::multiply(DyadicFunction b) {
  OperatorSpec o;
  o.kind = Kind::Multiply;
  o.symbol = std::move(b);
  return o;
}

OperatorSpec OperatorSpec::para_b(DyadicFunction b) {
  OperatorSpec o;
  o.kind = Kind::ParaB;
  o.symbol = std::move(b);
  return o;
}

OperatorSpec OperatorSpec::para_b_adjoint(DyadicFunction b) {
  OperatorSpec o;
  o.kind = Kind::ParaBAdjoint;
  o.symbol = std::move(b);
  return o;
}

OperatorSpec OperatorSpec::para_c(DyadicFunction b) {
  OperatorSpec o;
  o.kind = Kind::ParaC;
  o.symbol = std::move(b);
  return o;
}

OperatorSpec OperatorSpec::para_d(int k, DyadicFunction b, std::size_t coord) {
  OperatorSpec o;
  o.kind = Kind::ParaD;
  o.k = k;
  o.symbol = std::move(b);
  o.coord = coord;
  return o;
}

OperatorSpec OperatorSpec::para_e(TensorParaSpec spec, DyadicFunction b) {
  OperatorSpec o;
  o.kind = Kind::ParaE;
  o.blocks = std::move(spec);
  o.symbol = std::move(b);
  return o;
}

OperatorSpec OperatorSpec::commutator(DyadicFunction b, std::vector<ScaleParam> scales) {
  OperatorSpec o;
  o.kind = Kind::Commutator;
  o.symbol = std::move(b);
  o.scales = std::move(scales);
  return o;
}

OperatorSpec OperatorSpec::compose(std::vector<OperatorSpec> parts) {
  OperatorSpec o;
  o.kind = Kind::Compose;
  o.parts = std::move(parts);
  return o;
}

std::string OperatorSpec::str() const {
  switch (kind) {
    case Kind::Riesz:
      return "Riesz(" + scales.at(0).str() + ",coord=" + std::to_string(coord) + ")";
    case Kind::Multiply:
      return "Multiply";
    case Kind::ParaB:
      return "ParaB";
    case Kind::ParaBAdjoint:
      return "ParaBAdjoint";
    case Kind::ParaC:
      return "ParaC";
    case Kind::ParaD:
      return "ParaD(" + std::to_string(k) + ",coord=" + std::to_string(coord) + ")";
    case Kind::ParaE:
      return "ParaE(" + blocks.str() + ")";
    case Kind::Commutator: {
      std::string s = "Commutator(";
      for (std::size_t j = 0; j < scales.size(); ++j) s += (j ? "," : "") + scales[j].str();
      return s + ")";
    }
    case Kind::Compose: {
      std::string s = "Compose[";
      for (std::size_t j = 0; j < parts.size(); ++j) s += (j ? "," : "") + parts[j].str();
      return s + "]";
    }
  }
  return "?";
}

DyadicFunction apply(const OperatorSpec& spec, const DyadicFunction& f) {
  using Kind = OperatorSpec::Kind;
  switch (spec.kind) {
    case Kind::Riesz:
      return riesz_apply(spec.scales.at(0), f, spec.coord);
    case Kind::Multiply:
      return multiply(spec.symbol, f);
    case Kind::ParaB:
      return para_B(spec.symbol, f);
    case Kind::ParaBAdjoint:
      return para_B_adjoint(spec.symbol, f);
    case Kind::ParaC:
      return para_C(spec.symbol, f);
    case Kind::ParaD:
      return para_D(spec.k, spec.symbol, f, spec.coord);
    case Kind::ParaE:
      return para_E(spec.blocks, spec.symbol, f);
    case Kind::Commutator:
      return commutator_direct(spec.symbol, spec.scales, f);
    case Kind::Compose: {
      DyadicFunction g = f;
      for (auto it = spec.parts.rbegin(); it != spec.parts.rend(); ++it) g = apply(*it, g);
      return g;
    }
  }
  throw DomainError("apply: unknown operator kind");
}

}  // namespace dyalab
