#include "conserv/dyntree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "conserv/errors.hpp"
#include "conserv/roots.hpp"

namespace conserv {

using cd = std::complex<double>;

int FixedPointSet::superattracting() const {
  return static_cast<int>(std::count_if(points.begin(), points.end(), [](const FixedPoint& f) { return f.kind == FixedClass::Superattracting; }));
}

int FixedPointSet::repelling() const {
  return static_cast<int>(std::count_if(points.begin(), points.end(), [](const FixedPoint& f) { return f.kind == FixedClass::Repelling; }));
}

namespace {

std::vector<BigComplex> fixed_equation(const std::vector<BigComplex>& c) {
  std::vector<BigComplex> f = c;
  f.resize(std::max<std::size_t>(f.size(), 2));
  f[1] -= BigComplex(BigFloat(1L), BigFloat(0L));
  return f;
}

std::vector<cd> to_double(const std::vector<BigComplex>& c) {
  std::vector<cd> out;
  for (const auto& x : c) out.push_back(x.to_complex());
  return out;
}

cd horner(const std::vector<cd>& a, cd z) {
  cd r = 0;
  for (std::size_t k = a.size(); k-- > 0;) r = r * z + a[k];
  return r;
}

void horner2(const std::vector<cd>& a, cd z, cd* p, cd* dp) {
  cd r = 0, dr = 0;
  for (std::size_t k = a.size(); k-- > 0;) {
    dr = dr * z + r;
    r = r * z + a[k];
  }
  *p = r;
  *dp = dr;
}

// Coefficients of a(w + u) in powers of u.
std::vector<cd> taylor_shift(std::vector<cd> a, cd w) {
  const std::size_t n = a.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = n - 1; i > k; --i) a[i - 1] += w * a[i];
    out[k] = a[k];
  }
  return out;
}

// Largest rho (up to `cap`) on which C is injective and expanding around a repelling point.
double linearization_radius(const std::vector<cd>& taylor, double cap) {
  const double lam = std::abs(taylor[1]);
  double rho = cap;
  for (int it = 0; it < 200; ++it) {
    // sum_k k |b_k| rho^(k-1) bounds |C' - lambda| on the disk.
    double s = 0, rp = rho;
    for (std::size_t k = 2; k < taylor.size(); ++k) {
      s += static_cast<double>(k) * std::abs(taylor[k]) * rp;
      rp *= rho;
    }
    if (s < (lam - 1) / 2) return rho;
    rho /= 2;
  }
  return 0;
}

bool position_less(const FixedPoint& a, const FixedPoint& b, const BigFloat& tol) {
  if (abs(a.location.re - b.location.re) > tol) return a.location.re < b.location.re;
  return a.location.im < b.location.im;
}

}  // namespace

FixedPointSet fixed_points(const ConservativePolynomial& c, unsigned precision) {
  PrecisionScope scope(precision + 64);
  const auto coeffs = c.coefficients();
  std::vector<BigComplex> locations;
  if (c.rational) {
    UniPoly f = *c.rational - UniPoly::x();
    for (const auto& part : squarefree_decomposition(f)) {
      if (part.degree() < 1) continue;
      for (auto& disk : complex_roots(part, 2 * precision)) locations.push_back(std::move(disk.center));
    }
  } else {
    locations = approximate_roots(fixed_equation(coeffs));
  }
  if (static_cast<int>(locations.size()) != c.degree) throw PrecisionExhaustedError("fixed point count differs from the degree");
  std::vector<BigComplex> dcoeffs;
  for (std::size_t k = 1; k < coeffs.size(); ++k) dcoeffs.push_back(coeffs[k] * BigFloat(static_cast<long>(k)));
  BigFloat scale = 1;
  for (const auto& a : coeffs) scale = max(scale, abs(a));
  const BigFloat tiny = scale * pow2(-static_cast<long>(precision / 4));
  FixedPointSet out;
  for (auto& z : locations) {
    FixedPoint fp;
    fp.multiplier = evaluate(dcoeffs, z);
    const BigFloat m = abs(fp.multiplier);
    if (m < tiny) {
      fp.kind = FixedClass::Superattracting;
      // Snap to the known critical point and take its multiplicity.
      const CriticalPoint* best = nullptr;
      BigFloat best_dist;
      for (const auto& cp : c.critical_points) {
        BigFloat dist = abs(cp.location - z);
        if (!best || dist < best_dist) {
          best = &cp;
          best_dist = dist;
        }
      }
      if (best) {
        if (best_dist > max(BigFloat(1L), abs(z)) * pow2(-static_cast<long>(precision / 8)))
          throw ValidationError("superattracting fixed point is not a listed critical point");
        fp.location = BigComplex(BigFloat(best->location.re), BigFloat(best->location.im));
        fp.local_degree = best->multiplicity + 1;
      } else {
        fp.location = z;
        fp.local_degree = 2;
      }
    } else {
      fp.location = z;
      fp.kind = m > BigFloat(1L) ? FixedClass::Repelling : FixedClass::Other;
    }
    out.points.push_back(std::move(fp));
  }
  const BigFloat tol = pow2(-static_cast<long>(precision / 4));
  std::sort(out.points.begin(), out.points.end(), [&](const FixedPoint& a, const FixedPoint& b) { return position_less(a, b, tol); });
  return out;
}

namespace {

struct Tracer {
  std::vector<cd> coeffs;
  std::vector<cd> critical;
  int steps = 0;
  int max_steps = 0;

  double critical_distance(cd y) const {
    double best = 1e300;
    for (cd z : critical) best = std::min(best, std::abs(y - z));
    return best;
  }

  // Solve C(y) = q near the guess; returns false if Newton does not settle.
  bool newton(cd q, cd& y) const {
    const double scale = std::max(1.0, std::abs(q));
    cd p, dp;
    for (int it = 0; it < 30; ++it) {
      horner2(coeffs, y, &p, &dp);
      if (dp == cd(0)) return false;
      cd step = (p - q) / dp;
      y -= step;
      // Evaluation noise near a critical point keeps the step from reaching machine precision.
      if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(y))) break;
    }
    horner2(coeffs, y, &p, &dp);
    return std::abs(p - q) < 1e-11 * scale;
  }

  // Lift the segment q0 -> q1 starting from y0 (C(y0) = q0); appends lifted samples.
  void lift_segment(cd q0, cd q1, cd y0, std::vector<cd>& out, int depth) {
    if (++steps > max_steps) throw ReconstructionError("ray tracing exceeded its step budget");
    cd p, dp;
    horner2(coeffs, y0, &p, &dp);
    cd y = y0 + (q1 - q0) / dp;
    const cd pred = y;
    bool ok = newton(q1, y);
    const double move = std::abs(y - y0);
    if (ok) ok = std::abs(y - pred) <= 0.25 * move + 1e-14 && move <= 0.1 * critical_distance(y0) + 1e-14;
    if (!ok) {
      if (depth > 40) throw PrecisionExhaustedError("inverse branch ambiguous along the ray");
      cd mid = 0.5 * (q0 + q1);
      lift_segment(q0, mid, y0, out, depth + 1);
      cd ymid = out.back();
      lift_segment(mid, q1, ymid, out, depth + 1);
      return;
    }
    out.push_back(y);
  }
};

}  // namespace

InternalRay trace_ray(const ConservativePolynomial& c, const FixedPointSet& fixed, int white, int k, const TraceOptions& options) {
  const auto& fp = fixed.points.at(static_cast<std::size_t>(white));
  if (fp.kind != FixedClass::Superattracting) throw ValidationError("rays start at superattracting fixed points");
  const int alpha = fp.local_degree - 1;
  if (k < 0 || k >= alpha) throw ValidationError("ray index out of range");
  Tracer tr;
  {
    PrecisionScope scope(c.precision + 64);
    tr.coeffs = to_double(c.coefficients());
  }
  for (const auto& f : fixed.points)
    if (f.kind == FixedClass::Superattracting) tr.critical.push_back(f.location.to_complex());
  tr.max_steps = options.max_steps;
  const cd zeta = fp.location.to_complex();
  const auto loc = taylor_shift(tr.coeffs, zeta);
  const cd lead = loc.at(static_cast<std::size_t>(alpha) + 1);
  double nearest = 1e300;
  for (const auto& f : fixed.points)
    if (&f != &fp) nearest = std::min(nearest, std::abs(f.location.to_complex() - zeta));
  double r0 = 0.1 * std::min(nearest, std::pow(std::abs(lead), -1.0 / alpha));
  if (static_cast<std::size_t>(alpha) + 2 < loc.size() && std::abs(loc[static_cast<std::size_t>(alpha) + 2]) > 0)
    r0 = std::min(r0, 0.1 * std::abs(lead) / std::abs(loc[static_cast<std::size_t>(alpha) + 2]));

  InternalRay ray;
  ray.white = white;
  ray.index = k;
  ray.start_angle = (-std::arg(lead) + 2 * std::numbers::pi * k) / alpha;
  const cd x0 = zeta + std::polar(r0, ray.start_angle);

  // Landing data for the repelling fixed points.
  struct Target {
    int id;
    cd at;
    double rho;
  };
  std::vector<Target> targets;
  for (std::size_t i = 0; i < fixed.points.size(); ++i) {
    const auto& f = fixed.points[i];
    if (f.kind != FixedClass::Repelling) continue;
    const cd b = f.location.to_complex();
    double gap = 1e300;
    for (const auto& g : fixed.points)
      if (&g != &f) gap = std::min(gap, std::abs(g.location.to_complex() - b));
    targets.push_back({static_cast<int>(i), b, linearization_radius(taylor_shift(tr.coeffs, b), 0.5 * gap)});
  }

  std::vector<cd> level;
  const cd q0 = horner(tr.coeffs, x0);
  const int samples = 16;
  for (int i = 0; i <= samples; ++i) level.push_back(q0 + (x0 - q0) * (static_cast<double>(i) / samples));
  ray.polyline.push_back(zeta);
  ray.polyline.insert(ray.polyline.end(), level.begin(), level.end());
  for (int lv = 0; lv < options.max_levels; ++lv) {
    for (const auto& t : targets) {
      bool inside = t.rho > 0;
      for (std::size_t i = 0; inside && i < level.size(); ++i) inside = std::abs(level[i] - t.at) < t.rho;
      if (inside) {
        ray.landing = t.id;
        ray.polyline.push_back(t.at);
        return ray;
      }
    }
    // Lift the current level: its start maps to the previous end.
    std::vector<cd> next{level.back()};
    for (std::size_t i = 0; i + 1 < level.size(); ++i) tr.lift_segment(level[i], level[i + 1], next.back(), next, 0);
    ray.polyline.insert(ray.polyline.end(), next.begin() + 1, next.end());
    level = std::move(next);
  }
  throw ReconstructionError("ray did not land within the level budget");
}

Reconstruction reconstruct(const ConservativePolynomial& c, unsigned precision) {
  if (c.rational) check_conservative(c);
  Reconstruction r;
  r.fixed = fixed_points(c, precision);
  const int n = static_cast<int>(r.fixed.points.size());
  int white_count = 0;
  for (const auto& f : r.fixed.points) {
    if (f.kind == FixedClass::Other) throw ReconstructionError("fixed point is neither superattracting nor repelling");
    if (f.kind == FixedClass::Superattracting) ++white_count;
  }
  if (white_count != static_cast<int>(c.critical_points.size()))
    throw ReconstructionError("superattracting fixed points do not match the critical points");
  r.tree.colors.resize(static_cast<std::size_t>(n));
  r.tree.adjacency.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& f = r.fixed.points[static_cast<std::size_t>(i)];
    r.tree.colors[static_cast<std::size_t>(i)] = f.kind == FixedClass::Superattracting ? Color::White : Color::Black;
    if (f.kind != FixedClass::Superattracting) continue;
    for (int k = 0; k < f.local_degree - 1; ++k) {
      r.rays.push_back(trace_ray(c, r.fixed, i, k));
      r.tree.adjacency[static_cast<std::size_t>(i)].push_back(r.rays.back().landing);
    }
  }
  // Cyclic order at black vertices from crossing angles on a small circle.
  for (int b = 0; b < n; ++b) {
    if (r.tree.colors[static_cast<std::size_t>(b)] == Color::White) continue;
    const cd at = r.fixed.points[static_cast<std::size_t>(b)].location.to_complex();
    std::vector<InternalRay*> incoming;
    for (auto& ray : r.rays)
      if (ray.landing == b) incoming.push_back(&ray);
    if (incoming.empty()) throw ReconstructionError("repelling fixed point receives no ray");
    // Radius inside the final approach of every incoming ray.
    double rho = 1e300;
    for (auto* ray : incoming) {
      const auto& pl = ray->polyline;
      rho = std::min(rho, std::abs(pl[pl.size() - 2] - at));
    }
    rho *= 0.5;
    for (auto* ray : incoming) {
      const auto& pl = ray->polyline;
      std::size_t i = pl.size() - 1;
      while (i > 0 && std::abs(pl[i - 1] - at) < rho) --i;
      if (i == 0) throw ReconstructionError("ray never leaves the landing neighborhood");
      const cd a = pl[i - 1], e = pl[i];
      const double da = std::abs(a - at), de = std::abs(e - at);
      const double s = (da - rho) / (da - de);
      ray->end_angle = std::arg(a + s * (e - a) - at);
    }
    std::sort(incoming.begin(), incoming.end(), [](const InternalRay* x, const InternalRay* y) { return x->end_angle < y->end_angle; });
    for (std::size_t i = 1; i < incoming.size(); ++i)
      if (incoming[i]->end_angle - incoming[i - 1]->end_angle < 1e-9)
        throw PrecisionExhaustedError("two rays land indistinguishably close");
    for (auto* ray : incoming) r.tree.adjacency[static_cast<std::size_t>(b)].push_back(ray->white);
  }
  try {
    validate(r.tree);
  } catch (const ValidationError& e) {
    throw ReconstructionError(std::string("reconstructed graph is not a plane tree: ") + e.what());
  }
  return r;
}

PlaneTree reconstruct_tree(const ConservativePolynomial& c, unsigned precision) { return reconstruct(c, precision).tree; }

std::string Image::ppm() const {
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

namespace {

std::array<std::uint8_t, 3> palette(std::size_t i, std::size_t n) {
  // Evenly spaced hues, full saturation.
  const double h = 6.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1));
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double v = 230, lo = 40;
  const double up = lo + (v - lo) * f, down = v - (v - lo) * f;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v; g = up; b = lo; break;
    case 1: r = down; g = v; b = lo; break;
    case 2: r = lo; g = v; b = up; break;
    case 3: r = lo; g = down; b = v; break;
    case 4: r = up; g = lo; b = v; break;
    default: r = v; g = lo; b = down; break;
  }
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
}

}  // namespace

Image render_basins(const ConservativePolynomial& c, const Viewport& view, int resolution, int max_iter) {
  if (!(view.x1 > view.x0) || !(view.y1 > view.y0)) throw ValidationError("empty viewport");
  if (resolution < 1) throw ValidationError("resolution must be positive");
  Image img;
  img.width = img.height = resolution;
  std::vector<cd> coeffs;
  {
    PrecisionScope scope(c.precision + 64);
    coeffs = to_double(c.coefficients());
  }
  const auto fixed = fixed_points(c, c.precision);
  for (const auto& f : fixed.points)
    if (f.kind == FixedClass::Superattracting) img.attractors.push_back(f.location.to_complex());
  const double capture = 1e-6;
  const double escape = 1e8;
  img.basin.assign(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), -1);
  img.rgb.assign(img.basin.size() * 3, 0);
  std::vector<std::array<std::uint8_t, 3>> colors;
  for (std::size_t i = 0; i < img.attractors.size(); ++i) colors.push_back(palette(i, img.attractors.size()));
  const double dx = (view.x1 - view.x0) / resolution, dy = (view.y1 - view.y0) / resolution;
  for (int py = 0; py < resolution; ++py)
    for (int px = 0; px < resolution; ++px) {
      cd z(view.x0 + (px + 0.5) * dx, view.y1 - (py + 0.5) * dy);
      int id = -1;
      for (int it = 0; it <= max_iter && id < 0; ++it) {
        for (std::size_t a = 0; a < img.attractors.size(); ++a)
          if (std::abs(z - img.attractors[a]) < capture) {
            id = static_cast<int>(a);
            break;
          }
        if (id >= 0 || std::abs(z) > escape) break;
        z = horner(coeffs, z);
      }
      const std::size_t at = static_cast<std::size_t>(py) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(px);
      img.basin[at] = id;
      if (id >= 0)
        for (int ch = 0; ch < 3; ++ch) img.rgb[3 * at + static_cast<std::size_t>(ch)] = colors[static_cast<std::size_t>(id)][static_cast<std::size_t>(ch)];
    }
  return img;
}

double symmetry_score(const Image& img, const Viewport& view, cd rot) {
  std::vector<int> perm;
  for (cd a : img.attractors) {
    int best = -1;
    double bd = 1e300;
    for (std::size_t j = 0; j < img.attractors.size(); ++j) {
      double d = std::abs(rot * a - img.attractors[j]);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(j);
      }
    }
    if (bd > 1e-6) return 0;
    perm.push_back(best);
  }
  const int n = img.width;
  const double dx = (view.x1 - view.x0) / n, dy = (view.y1 - view.y0) / img.height;
  long total = 0, match = 0;
  for (int py = 0; py < img.height; ++py)
    for (int px = 0; px < n; ++px) {
      cd z(view.x0 + (px + 0.5) * dx, view.y1 - (py + 0.5) * dy);
      cd w = rot * z;
      int qx = static_cast<int>(std::floor((w.real() - view.x0) / dx));
      int qy = static_cast<int>(std::floor((view.y1 - w.imag()) / dy));
      if (qx < 0 || qy < 0 || qx >= n || qy >= img.height) continue;
      const int a = img.basin[static_cast<std::size_t>(py) * static_cast<std::size_t>(n) + static_cast<std::size_t>(px)];
      const int want = a < 0 ? -1 : perm[static_cast<std::size_t>(a)];
      // The rotated point falls between pixel centers; any of the four around it may stand for it.
      const int gx = static_cast<int>(std::floor((w.real() - view.x0) / dx - 0.5));
      const int gy = static_cast<int>(std::floor((view.y1 - w.imag()) / dy - 0.5));
      bool ok = false;
      for (int oy = 0; oy < 2 && !ok; ++oy)
        for (int ox = 0; ox < 2 && !ok; ++ox) {
          const int cx = gx + ox, cy = gy + oy;
          if (cx < 0 || cy < 0 || cx >= n || cy >= img.height) continue;
          const int b = img.basin[static_cast<std::size_t>(cy) * static_cast<std::size_t>(n) + static_cast<std::size_t>(cx)];
          ok = (want < 0 && b < 0) || (want >= 0 && b == want);
        }
      ++total;
      if (ok) ++match;
    }
  return total ? static_cast<double>(match) / static_cast<double>(total) : 0;
}

}  // namespace conserv
