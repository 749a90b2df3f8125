#include "dyalab/function.hpp"

#include "dyalab/errors.hpp"

namespace dyalab {
namespace {

void check_dim(const DyadicFunction& a, const DyadicFunction& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DomainError(std::string(what) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
  }
}

void expand(DyadicFunction& out, const Scalar& coeff, const std::vector<Terms1>& factors, std::size_t j,
            DyadicFunction::Factors& current, const Scalar& acc) {
  if (j == factors.size()) {
    out.add_term(current, coeff * acc);
    return;
  }
  for (const auto& [atom, c] : factors[j]) {
    current[j] = atom;
    expand(out, coeff, factors, j + 1, current, acc * c);
  }
}

struct Hulls {
  std::optional<Interval> pos;
  std::optional<Interval> neg;

  void add(const Interval& i) {
    auto& h = i.nonnegative() ? pos : neg;
    h = h ? *smallest_common(*h, i) : i;
  }
  const Interval& of(const Interval& i) const { return i.nonnegative() ? *pos : *neg; }
};

// 1_J for J inside H: the mean on H plus the Haar functions strictly between.
void expand_indicator(const Interval& j, const Interval& h, const Scalar& coeff, Terms1& out) {
  if (j == h) {
    out.emplace_back(Atom::indicator(h), coeff);
    return;
  }
  const Scalar len(j.length());
  out.emplace_back(Atom::indicator(h), coeff * Scalar(mpq_class(j.length() / h.length())));
  for (Interval i = j.parent();; i = i.parent()) {
    out.emplace_back(Atom::haar(i), coeff * len * *atoms::value_on(Atom::haar(i), j));
    if (i == h) break;
  }
}

Terms1 expand_atom(const Atom& a, const Interval& h) {
  Terms1 out;
  switch (a.kind) {
    case AtomKind::Haar:
      out.emplace_back(a, Scalar(1));
      break;
    case AtomKind::Indicator:
      expand_indicator(a.iv, h, Scalar(1), out);
      break;
    case AtomKind::Tail: {
      // G(J, r) = sum_{k<m} r^k 1_{J_k} + r^m (1_H + G(H, r)), with H = J_m.
      const int m = h.scale - a.iv.scale;
      if (m == 0) {
        out.emplace_back(a, Scalar(1));
        break;
      }
      for (int k = 1; k < m; ++k) expand_indicator(a.iv.ancestor(k), h, Scalar(pow_q(a.ratio, k)), out);
      const Scalar top(pow_q(a.ratio, m));
      out.emplace_back(Atom::indicator(h), top);
      out.emplace_back(Atom::tail(h, a.ratio), top);
      break;
    }
  }
  return out;
}

}  // namespace

DyadicFunction DyadicFunction::elementary(Factors factors, const Scalar& coeff) {
  DyadicFunction f(factors.size());
  f.add_term(factors, coeff);
  return f;
}

DyadicFunction DyadicFunction::haar(const Rectangle& r) {
  Factors factors;
  for (const auto& side : r.sides) factors.push_back(Atom::haar(side));
  return elementary(std::move(factors));
}

DyadicFunction DyadicFunction::indicator(const Rectangle& r) {
  Factors factors;
  for (const auto& side : r.sides) factors.push_back(Atom::indicator(side));
  return elementary(std::move(factors));
}

void DyadicFunction::add_term(const Factors& factors, const Scalar& coeff) {
  if (factors.size() != dim_) throw DomainError("add_term: factor count does not match dimension");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(factors, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

bool DyadicFunction::is_pure_haar() const {
  for (std::size_t j = 0; j < dim_; ++j) {
    if (!is_pure_haar(j)) return false;
  }
  return true;
}

bool DyadicFunction::is_pure_haar(std::size_t coord) const {
  for (const auto& [factors, c] : terms_) {
    if (factors[coord].kind != AtomKind::Haar) return false;
  }
  return true;
}

bool DyadicFunction::has_tails() const {
  for (const auto& [factors, c] : terms_) {
    for (const auto& a : factors) {
      if (a.kind == AtomKind::Tail) return true;
    }
  }
  return false;
}

Scalar DyadicFunction::eval(const std::vector<mpq_class>& x) const {
  if (x.size() != dim_) throw DomainError("eval: point dimension mismatch");
  Scalar total;
  for (const auto& [factors, c] : terms_) {
    Scalar v = c;
    for (std::size_t j = 0; j < dim_ && !v.is_zero(); ++j) v *= atoms::eval(factors[j], x[j]);
    total += v;
  }
  return total;
}

DyadicFunction& DyadicFunction::operator+=(const DyadicFunction& o) {
  check_dim(*this, o, "operator+");
  for (const auto& [factors, c] : o.terms_) add_term(factors, c);
  return *this;
}

DyadicFunction& DyadicFunction::operator-=(const DyadicFunction& o) {
  check_dim(*this, o, "operator-");
  for (const auto& [factors, c] : o.terms_) add_term(factors, -c);
  return *this;
}

DyadicFunction& DyadicFunction::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [factors, c] : terms_) c *= s;
  return *this;
}

std::string DyadicFunction::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [factors, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (const auto& a : factors) out += " " + a.str();
  }
  return out;
}

void add_tensor(DyadicFunction& out, const Scalar& coeff, const std::vector<Terms1>& factors) {
  if (factors.size() != out.dim()) throw DomainError("add_tensor: factor count does not match dimension");
  if (coeff.is_zero()) return;
  DyadicFunction::Factors current(factors.size());
  expand(out, coeff, factors, 0, current, Scalar(1));
}

DyadicFunction map_coordinate(const DyadicFunction& f, std::size_t coord,
                              const std::function<Terms1(const Atom&)>& op) {
  if (coord >= f.dim()) throw DomainError("map_coordinate: coordinate out of range");
  DyadicFunction out(f.dim());
  for (const auto& [factors, c] : f.terms()) {
    DyadicFunction::Factors next = factors;
    for (const auto& [atom, ca] : op(factors[coord])) {
      next[coord] = atom;
      out.add_term(next, c * ca);
    }
  }
  return out;
}

DyadicFunction canonicalize(const DyadicFunction& f) {
  const std::size_t d = f.dim();
  std::vector<Hulls> hulls(d);
  for (const auto& [factors, c] : f.terms()) {
    for (std::size_t j = 0; j < d; ++j) hulls[j].add(factors[j].iv);
  }
  std::vector<std::map<Atom, Terms1>> cache(d);
  std::vector<Terms1> per(d);
  DyadicFunction out(d);
  for (const auto& [factors, c] : f.terms()) {
    for (std::size_t j = 0; j < d; ++j) {
      auto it = cache[j].find(factors[j]);
      if (it == cache[j].end()) {
        it = cache[j].emplace(factors[j], expand_atom(factors[j], hulls[j].of(factors[j].iv))).first;
      }
      per[j] = it->second;
    }
    add_tensor(out, c, per);
  }
  return out;
}

bool vanishes(const DyadicFunction& f) { return canonicalize(f).is_zero(); }

bool equivalent(const DyadicFunction& f, const DyadicFunction& g) { return vanishes(f - g); }

DyadicFunction multiply(const DyadicFunction& f, const DyadicFunction& g) {
  check_dim(f, g, "multiply");
  DyadicFunction out(f.dim());
  std::vector<Terms1> per(f.dim());
  for (const auto& [fa, fc] : f.terms()) {
    for (const auto& [ga, gc] : g.terms()) {
      bool zero = false;
      for (std::size_t j = 0; j < f.dim(); ++j) {
        per[j] = atoms::multiply(fa[j], ga[j]);
        if (per[j].empty()) {
          zero = true;
          break;
        }
      }
      if (!zero) add_tensor(out, fc * gc, per);
    }
  }
  return out;
}

Scalar inner_product(const DyadicFunction& f, const DyadicFunction& g) {
  check_dim(f, g, "inner_product");
  Scalar total;
  for (const auto& [fa, fc] : f.terms()) {
    for (const auto& [ga, gc] : g.terms()) {
      Scalar v = fc * gc;
      for (std::size_t j = 0; j < f.dim() && !v.is_zero(); ++j) v *= atoms::inner(fa[j], ga[j]);
      total += v;
    }
  }
  return total;
}

Scalar integral(const DyadicFunction& f) {
  Scalar total;
  for (const auto& [factors, c] : f.terms()) {
    Scalar v = c;
    for (std::size_t j = 0; j < f.dim() && !v.is_zero(); ++j) v *= atoms::integral(factors[j]);
    total += v;
  }
  return total;
}

std::string HaarIndex::str() const {
  std::string out = "h^(";
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(eps[j]);
  }
  return out + ")" + rect.str();
}

DyadicFunction haar_function(const HaarIndex& idx) {
  DyadicFunction::Factors factors;
  Scalar coeff(1);
  for (std::size_t j = 0; j < idx.rect.dim(); ++j) {
    const Interval& side = idx.rect.sides[j];
    if (idx.eps.at(j) == 0) {
      factors.push_back(Atom::haar(side));
    } else {
      factors.push_back(Atom::indicator(side));
      coeff *= atoms::haar_amplitude(side.scale);
    }
  }
  return DyadicFunction::elementary(std::move(factors), coeff);
}

Scalar haar_eval(const HaarIndex& idx, const std::vector<mpq_class>& x) {
  return haar_function(idx).eval(x);
}

HaarCoefficients haar_coefficients(const DyadicFunction& f) {
  if (!f.is_pure_haar()) throw DomainError("haar_coefficients: function has non-Haar factors");
  HaarCoefficients out;
  for (const auto& [factors, c] : f.terms()) {
    Rectangle r;
    for (const auto& a : factors) r.sides.push_back(a.iv);
    out.emplace(std::move(r), c);
  }
  return out;
}

DyadicFunction from_haar_coefficients(const HaarCoefficients& coeffs, std::size_t dim) {
  DyadicFunction out(dim);
  for (const auto& [r, c] : coeffs) {
    if (r.dim() != dim) throw DomainError("from_haar_coefficients: rectangle dimension mismatch");
    DyadicFunction::Factors factors;
    for (const auto& side : r.sides) factors.push_back(Atom::haar(side));
    out.add_term(factors, c);
  }
  return out;
}

}  // namespace dyalab
