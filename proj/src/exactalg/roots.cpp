#include "conserv/roots.hpp"

#include <algorithm>
#include <cmath>

#include "conserv/errors.hpp"

namespace conserv {

BigComplex evaluate(const std::vector<BigComplex>& coeffs, const BigComplex& z) {
  BigComplex acc;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

BigComplex evaluate(const UniPoly& f, const BigComplex& z) {
  BigComplex acc;
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) {
    acc *= z;
    acc.re += BigFloat(*it);
  }
  return acc;
}

namespace {

std::vector<BigComplex> to_complex_coeffs(const UniPoly& f) {
  std::vector<BigComplex> out;
  out.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) out.emplace_back(BigFloat(c), BigFloat(0L));
  return out;
}

// p(z), p'(z) and the Horner magnitude sum |a_k| |z|^k.
void eval_with_bound(const std::vector<BigComplex>& a, const BigComplex& z, BigComplex* p, BigComplex* dp, BigFloat* mag) {
  BigComplex f, df;
  BigFloat az = abs(z), m;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    df *= z;
    df += f;
    f *= z;
    f += *it;
    m = m * az + abs(*it);
  }
  *p = std::move(f);
  *dp = std::move(df);
  *mag = std::move(m);
}

// Initial points on circles given by the upper convex hull of (k, log|a_k|).
std::vector<BigComplex> initial_guesses(const std::vector<BigComplex>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<double> lg(a.size());
  for (int k = 0; k <= n; ++k) {
    BigFloat m = abs(a[static_cast<std::size_t>(k)]);
    if (m.is_zero()) {
      lg[static_cast<std::size_t>(k)] = -1e300;
    } else {
      long e;
      double mant = mpfr_get_d_2exp(&e, m.get(), MPFR_RNDN);
      lg[static_cast<std::size_t>(k)] = std::log(std::fabs(mant)) + static_cast<double>(e) * std::log(2.0);
    }
  }
  std::vector<int> hull;
  for (int k = 0; k <= n; ++k) {
    if (lg[static_cast<std::size_t>(k)] < -1e299) continue;
    while (hull.size() >= 2) {
      int i = hull[hull.size() - 2], j = hull.back();
      double cross = (j - i) * (lg[static_cast<std::size_t>(k)] - lg[static_cast<std::size_t>(i)]) -
                     (k - i) * (lg[static_cast<std::size_t>(j)] - lg[static_cast<std::size_t>(i)]);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<BigComplex> out;
  const double two_pi = 2.0 * std::acos(-1.0);
  // Zero roots correspond to leading zero coefficients at the low end.
  for (int k = 0; k < hull.front(); ++k) out.emplace_back(BigFloat(0L), BigFloat(0L));
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    int i = hull[h], j = hull[h + 1];
    double log_r = (lg[static_cast<std::size_t>(i)] - lg[static_cast<std::size_t>(j)]) / (j - i);
    BigFloat r = exp(BigFloat(log_r));
    for (int k = 0; k < j - i; ++k) {
      double theta = two_pi * k / (j - i) + two_pi * static_cast<double>(h) / n + 0.4;
      out.push_back(BigComplex::polar(r, BigFloat(theta)));
    }
  }
  return out;
}

// Aberth iteration; returns true if every root met the stopping rule.
bool aberth(const std::vector<BigComplex>& a, std::vector<BigComplex>& z, int max_iter) {
  const std::size_t n = z.size();
  const long prec = static_cast<long>(working_precision());
  const BigFloat tol = pow2(-prec + 8);
  const BigFloat noise = pow2(-prec + 4) * BigFloat(static_cast<long>(4 * n + 4));
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      BigComplex p, dp;
      BigFloat mag;
      eval_with_bound(a, z[i], &p, &dp, &mag);
      if (abs(p) <= noise * mag) {
        done[i] = true;
        continue;
      }
      all = false;
      BigComplex ratio = p / dp;
      BigComplex s;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        BigComplex diff = z[i] - z[j];
        if (diff.is_zero()) diff.re = pow2(-prec);
        s += BigComplex(BigFloat(1L), BigFloat(0L)) / diff;
      }
      BigComplex w = ratio / (BigComplex(BigFloat(1L), BigFloat(0L)) - ratio * s);
      z[i] -= w;
      if (abs(w) <= tol * abs(z[i])) done[i] = true;
    }
    if (all) return true;
  }
  return std::all_of(done.begin(), done.end(), [](bool b) { return b; });
}

void newton_polish(const std::vector<BigComplex>& a, BigComplex& z, int iters) {
  const long prec = static_cast<long>(working_precision());
  const BigFloat tol = pow2(-prec + 4);
  for (int it = 0; it < iters; ++it) {
    BigComplex p, dp;
    BigFloat mag;
    eval_with_bound(a, z, &p, &dp, &mag);
    if (dp.is_zero()) return;
    BigComplex step = p / dp;
    z -= step;
    if (abs(step) <= tol * max(abs(z), pow2(-prec))) return;
  }
}

bool less_by_position(const RootDisk& x, const RootDisk& y) {
  BigFloat gap = x.radius + y.radius;
  if (abs(x.center.re - y.center.re) > gap) return x.center.re < y.center.re;
  return x.center.im < y.center.im;
}

}  // namespace

std::vector<BigComplex> approximate_roots(const std::vector<BigComplex>& coeffs) {
  std::vector<BigComplex> a = coeffs;
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  if (a.size() <= 1) return {};
  std::vector<BigComplex> z = initial_guesses(a);
  const int n = static_cast<int>(a.size()) - 1;
  aberth(a, z, 200 + 10 * n);
  for (auto& x : z) newton_polish(a, x, 60);
  return z;
}

std::vector<RootDisk> complex_roots(const UniPoly& f, unsigned precision) {
  if (f.is_zero()) throw ValidationError("roots of the zero polynomial");
  const int n = f.degree();
  if (n <= 0) return {};
  const long target = -static_cast<long>(precision) / 2;
  std::vector<BigComplex> z;
  unsigned aberth_bits = 64;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    const unsigned work = (precision + 64) << attempt;
    {
      PrecisionScope scope(aberth_bits);
      std::vector<BigComplex> a = to_complex_coeffs(f);
      if (z.empty()) {
        z = initial_guesses(a);
      } else {
        for (auto& x : z) x = BigComplex(x.re, x.im);
      }
      aberth(a, z, 200 + 10 * n);
    }
    PrecisionScope scope(work);
    std::vector<BigComplex> a = to_complex_coeffs(f);
    std::vector<RootDisk> disks;
    disks.reserve(z.size());
    bool ok = true;
    const BigFloat u = pow2(-static_cast<long>(work));
    const BigFloat err_factor = u * BigFloat(static_cast<long>(4 * n + 8));
    const BigFloat limit = pow2(target);
    for (auto& x : z) {
      BigComplex zz(x.re, x.im);
      newton_polish(a, zz, 40 + 2 * static_cast<int>(std::log2(static_cast<double>(work))));
      BigComplex p, dp;
      BigFloat mag;
      eval_with_bound(a, zz, &p, &dp, &mag);
      // Horner error bound for p and, more loosely, for p'.
      BigFloat err = err_factor * mag;
      BigFloat dmag;
      {
        BigFloat az = abs(zz), m;
        for (int k = n; k >= 1; --k) m = m * az + abs(a[static_cast<std::size_t>(k)]) * BigFloat(static_cast<long>(k));
        dmag = std::move(m);
      }
      BigFloat derr = err_factor * dmag;
      BigFloat lower = abs(dp) - derr;
      if (lower.sign() <= 0) {
        ok = false;
        x = zz;
        continue;
      }
      BigFloat radius = BigFloat(static_cast<long>(n)) * (abs(p) + err) / lower;
      if (radius > limit) ok = false;
      disks.push_back({zz, radius});
      x = zz;
    }
    if (ok) {
      const BigFloat widen = sqrt(BigFloat(2L)) * BigFloat(1.0001);
      for (std::size_t i = 0; i < disks.size() && ok; ++i)
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
          BigFloat gap = abs(disks[i].center - disks[j].center);
          if (gap <= widen * (disks[i].radius + disks[j].radius)) {
            ok = false;
            break;
          }
        }
    }
    if (ok) {
      std::sort(disks.begin(), disks.end(), less_by_position);
      return disks;
    }
    aberth_bits = std::min(work, aberth_bits * 2);
  }
  throw PrecisionExhaustedError("root isolation failed after 4 precision doublings");
}

bool ComplexBox::contains(const BigComplex& z) const {
  // Exact comparisons; rounding the bounds could drop a point on the edge.
  return mpfr_cmp_q(z.re.get(), re_lo.get_mpq_t()) >= 0 && mpfr_cmp_q(z.re.get(), re_hi.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(z.im.get(), im_lo.get_mpq_t()) >= 0 && mpfr_cmp_q(z.im.get(), im_hi.get_mpq_t()) <= 0;
}

AlgebraicNumber::AlgebraicNumber(UniPoly minpoly, ComplexBox box, BigComplex approx)
    : minpoly_(std::move(minpoly)), box_(std::move(box)), approx_(std::move(approx)) {
  // A root of a real polynomial whose box is symmetric-straddling and alone is real.
  real_ = box_.im_lo < 0 && box_.im_hi > 0;
}

BigComplex AlgebraicNumber::approximate(unsigned bits) const {
  PrecisionScope scope(bits + 32);
  BigComplex z(approx_.re, approx_.im);
  if (real_) z.im = BigFloat(0L);
  std::vector<BigComplex> a = to_complex_coeffs(minpoly_);
  newton_polish(a, z, 200);
  if (!box_.contains(z)) throw PrecisionExhaustedError("refinement left the isolating box");
  return z;
}

std::vector<AlgebraicNumber> algebraic_roots(const UniPoly& irreducible, unsigned precision) {
  auto disks = complex_roots(irreducible, precision);
  std::vector<AlgebraicNumber> out;
  PrecisionScope scope(precision + 64);
  for (auto& d : disks) {
    Rational r = (d.radius * BigFloat(1.001)).to_rational();
    Rational cr = d.center.re.to_rational(), ci = d.center.im.to_rational();
    ComplexBox box{cr - r, cr + r, ci - r, ci + r};
    out.emplace_back(irreducible, box, d.center);
  }
  return out;
}

}  // namespace conserv
