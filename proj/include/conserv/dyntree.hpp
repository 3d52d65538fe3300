#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "conserv/conspoly.hpp"
#include "conserv/treecomb.hpp"

namespace conserv {

enum class FixedClass : std::uint8_t { Superattracting, Repelling, Other };

struct FixedPoint {
  BigComplex location;
  BigComplex multiplier;
  FixedClass kind = FixedClass::Other;
  int local_degree = 1;  // 1 + multiplicity of the critical point (superattracting only)
};

struct FixedPointSet {
  std::vector<FixedPoint> points;  // sorted by position
  int superattracting() const;
  int repelling() const;
};

// All d roots of C(z) - z, classified by multiplier.
FixedPointSet fixed_points(const ConservativePolynomial& c, unsigned precision);

struct InternalRay {
  int white = 0;  // index into the fixed point set
  int index = 0;  // ray number k, 0 <= k < local_degree - 1
  std::vector<std::complex<double>> polyline;  // from near the white vertex to the landing point
  int landing = -1;                             // index of a repelling fixed point
  double start_angle = 0;
  double end_angle = 0;  // direction of arrival at the landing point
};

struct TraceOptions {
  int max_steps = 100000;
  int max_levels = 400;
};

InternalRay trace_ray(const ConservativePolynomial& c, const FixedPointSet& fixed, int white, int k,
                      const TraceOptions& options = {});

struct Reconstruction {
  PlaneTree tree;  // vertex ids equal fixed point indices
  FixedPointSet fixed;
  std::vector<InternalRay> rays;
};

Reconstruction reconstruct(const ConservativePolynomial& c, unsigned precision);
PlaneTree reconstruct_tree(const ConservativePolynomial& c, unsigned precision);

struct Viewport {
  double x0 = -2, x1 = 2, y0 = -2, y1 = 2;
};

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first
  std::vector<int> basin;         // attracting fixed point id per pixel, -1 if none
  std::vector<std::complex<double>> attractors;  // palette order

  std::string ppm() const;  // binary P6
};

Image render_basins(const ConservativePolynomial& c, const Viewport& view, int resolution, int max_iter);

// Fraction of pixels whose image under z -> rot * z (inside the viewport) lies in the
// basin of the corresponding attractor; the image point is matched against the four
// pixel centers around it.
double symmetry_score(const Image& img, const Viewport& view, std::complex<double> rot);

}  // namespace conserv
