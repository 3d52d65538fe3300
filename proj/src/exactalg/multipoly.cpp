#include "conserv/multipoly.hpp"

#include <algorithm>
#include <sstream>

#include "conserv/errors.hpp"

namespace conserv {

MultiPoly MultiPoly::constant(std::size_t nvars, const Rational& c) {
  MultiPoly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::var(std::size_t nvars, std::size_t i) {
  MultiPoly p(nvars);
  Exponent e(nvars, 0);
  e.at(i) = 1;
  p.add_term(e, Rational(1));
  return p;
}

MultiPoly MultiPoly::from_unipoly(const UniPoly& f, std::size_t nvars, std::size_t var) {
  MultiPoly p(nvars);
  Exponent e(nvars, 0);
  for (int i = 0; i <= f.degree(); ++i) {
    e.at(var) = i;
    p.add_term(e, f.coeff(i));
  }
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Rational MultiPoly::constant_term() const {
  auto it = terms_.find(Exponent(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::degree(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != nvars_) throw ValidationError("exponent arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly MultiPoly::coeff_in(std::size_t var, int k) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exponent e2 = e;
    e2[var] = 0;
    out.terms_.emplace(std::move(e2), c);
  }
  return out;
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& value) const {
  check_arity(value);
  const int deg = degree(var);
  if (deg <= 0) return *this;
  std::vector<MultiPoly> powers{constant(nvars_, 1)};
  for (int k = 1; k <= deg; ++k) powers.push_back(powers.back() * value);
  MultiPoly out(nvars_);
  for (int k = 0; k <= deg; ++k) {
    MultiPoly ck = coeff_in(var, k);
    if (!ck.is_zero()) out += ck * powers[static_cast<std::size_t>(k)];
  }
  return out;
}

Rational MultiPoly::evaluate(const std::vector<Rational>& point) const {
  if (point.size() != nvars_) throw ValidationError("evaluation point arity mismatch");
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

UniPoly MultiPoly::to_unipoly(std::size_t var) const {
  std::vector<Rational> coeffs(static_cast<std::size_t>(std::max(degree(var), 0)) + 1);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < nvars_; ++i)
      if (i != var && e[i] != 0) throw ValidationError("polynomial is not univariate in the requested variable");
    coeffs[static_cast<std::size_t>(e[var])] = c;
  }
  return UniPoly(std::move(coeffs));
}

void MultiPoly::check_arity(const MultiPoly& o) const {
  if (o.nvars_ != nvars_) throw ValidationError("polynomial arity mismatch");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, x] : terms_) x *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_arity(b);
  MultiPoly out(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

MultiPoly pow(const MultiPoly& f, unsigned k) {
  MultiPoly result = MultiPoly::constant(f.nvars(), 1), base = f;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

MultiPoly derivative(const MultiPoly& f, std::size_t var) {
  MultiPoly out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e[var] == 0) continue;
    Exponent e2 = e;
    e2[var] -= 1;
    out.add_term(e2, c * e[var]);
  }
  return out;
}

MultiPoly primitive_part(const MultiPoly& f) {
  if (f.is_zero()) return f;
  Integer num_gcd = 0, den_lcm = 1;
  for (const auto& [e, c] : f.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (f.terms().rbegin()->second < 0) scale = -scale;
  return f * scale;
}

MultiDivRem divrem(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
  if (g.is_zero()) throw ValidationError("polynomial division by zero");
  const int dg = g.degree(var);
  MultiPoly lc = g.coeff_in(var, dg);
  if (!lc.is_constant()) throw UnsupportedDivisionError("divisor leading coefficient is not invertible in the coefficient ring");
  const Rational inv = 1 / lc.constant_term();
  MultiPoly rem = f, quo(f.nvars());
  for (int k = rem.degree(var); k >= dg && !rem.is_zero(); k = rem.degree(var)) {
    MultiPoly ck = rem.coeff_in(var, k) * inv;
    Exponent shift(f.nvars(), 0);
    shift[var] = k - dg;
    MultiPoly mono(f.nvars());
    mono.add_term(shift, Rational(1));
    MultiPoly q = ck * mono;
    quo += q;
    rem -= q * g;
  }
  return {std::move(quo), std::move(rem)};
}

std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g) {
  if (g.is_zero()) throw ValidationError("polynomial division by zero");
  MultiPoly rem = f, quo(f.nvars());
  const auto& [lead_e, lead_c] = *g.terms().rbegin();
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms().rbegin();
    Exponent e(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      e[i] = re[i] - lead_e[i];
      if (e[i] < 0) return std::nullopt;
    }
    MultiPoly q(f.nvars());
    q.add_term(e, rc / lead_c);
    quo += q;
    rem -= q * g;
  }
  return quo;
}

MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
  if (f.is_zero() || g.is_zero()) throw ValidationError("resultant of a zero polynomial");
  const int m = f.degree(var), n = g.degree(var);
  const std::size_t nv = f.nvars();
  if (m == 0) return pow(f, static_cast<unsigned>(n));
  if (n == 0) return pow(g, static_cast<unsigned>(m));
  const int size = m + n;
  std::vector<std::vector<MultiPoly>> mat(static_cast<std::size_t>(size), std::vector<MultiPoly>(static_cast<std::size_t>(size), MultiPoly(nv)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) mat[r][r + m - k] = f.coeff_in(var, k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) mat[n + r][r + n - k] = g.coeff_in(var, k);

  MultiPoly prev = MultiPoly::constant(nv, 1);
  int sign = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (mat[k][k].is_zero()) {
      int piv = -1;
      for (int r = k + 1; r < size; ++r)
        if (!mat[r][k].is_zero()) {
          piv = r;
          break;
        }
      if (piv < 0) return MultiPoly(nv);
      std::swap(mat[k], mat[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        MultiPoly num = mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j];
        auto q = exact_divide(num, prev);
        if (!q) throw InternalError("Bareiss step produced an inexact division");
        mat[i][j] = std::move(*q);
      }
      mat[i][k] = MultiPoly(nv);
    }
    prev = mat[k][k];
  }
  MultiPoly det = mat[size - 1][size - 1];
  return sign < 0 ? -det : det;
}

std::string to_string(const MultiPoly& f, const std::vector<std::string>& names) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool has_var = std::any_of(e.begin(), e.end(), [](int x) { return x > 0; });
    bool need_coeff = !has_var || a != 1;
    if (need_coeff) os << to_string(a);
    bool first_var = !need_coeff;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first_var) os << '*';
      first_var = false;
      os << (i < names.size() ? names[i] : "x" + std::to_string(i));
      if (e[i] > 1) os << '^' << e[i];
    }
    first = false;
  }
  return os.str();
}

std::optional<modp::u64> evaluate_mod(const MultiPoly& f, const std::vector<modp::u64>& point, modp::u64 p) {
  modp::u64 acc = 0;
  for (const auto& [e, c] : f.terms()) {
    auto term = modp::reduce(c, p);
    if (!term) return std::nullopt;
    modp::u64 t = *term;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j]) t = modp::mul(t, modp::pow(point[j], static_cast<modp::u64>(e[j]), p), p);
    acc = modp::add(acc, t, p);
  }
  return acc;
}

}  // namespace conserv
