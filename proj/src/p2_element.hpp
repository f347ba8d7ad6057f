#pragma once

// Reference-triangle quadrature and P2 shape functions shared by the
// Brinkman assembly and the post-processing routines.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "tdflow/grid.hpp"

namespace tdflow::detail {

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the triangle area; weights sum to 1
};

/// Six-point symmetric rule, exact for polynomials of degree 4.
inline const std::array<QuadPoint, 6>& degree4_rule() {
  static const std::array<QuadPoint, 6> rule = [] {
    constexpr double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * 0.445948490915965;
    constexpr double w1 = 0.223381589678011;
    constexpr double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * 0.091576213509771;
    constexpr double w2 = 0.109951743655322;
    return std::array<QuadPoint, 6>{{{{a1, a1, b1}, w1},
                                     {{a1, b1, a1}, w1},
                                     {{b1, a1, a1}, w1},
                                     {{a2, a2, b2}, w2},
                                     {{a2, b2, a2}, w2},
                                     {{b2, a2, a2}, w2}}};
  }();
  return rule;
}

/// Gauss-Legendre nodes/weights on [0, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Collapsed (Duffy) Gauss product rule with n^2 points; exact to degree
/// 2n - 2. Used for error norms against smooth reference solutions.
inline std::vector<QuadPoint> collapsed_gauss_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<QuadPoint> rule;
  rule.reserve(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = x[i];
      const double t = x[j] * (1.0 - s);
      // Reference triangle area is 1/2; weights normalized to sum 1.
      rule.push_back({{1.0 - s - t, s, t}, 2.0 * w[i] * w[j] * (1.0 - s)});
    }
  }
  return rule;
}

/// P2 basis on barycentric coordinates: vertices 0..2, then midpoints of
/// edges (0 1), (1 2), (2 0).
inline std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

/// Affine geometry of one triangle.
struct TriangleGeometry {
  double area = 0.0;
  // Cartesian gradients of the barycentric coordinates.
  std::array<Vec2, 3> grad_bary{};

  TriangleGeometry(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    area = 0.5 * det;
    grad_bary[0] = {(b[1] - c[1]) / det, (c[0] - b[0]) / det};
    grad_bary[1] = {(c[1] - a[1]) / det, (a[0] - c[0]) / det};
    grad_bary[2] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
  }

  Vec2 point(const Vec2& a, const Vec2& b, const Vec2& c, const std::array<double, 3>& l) const {
    return {l[0] * a[0] + l[1] * b[0] + l[2] * c[0], l[0] * a[1] + l[1] * b[1] + l[2] * c[1]};
  }

  std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& l) const {
    const auto& g = grad_bary;
    auto scaled = [](const Vec2& v, double s) { return Vec2{v[0] * s, v[1] * s}; };
    auto sum = [](const Vec2& u, const Vec2& v) { return Vec2{u[0] + v[0], u[1] + v[1]}; };
    return {scaled(g[0], 4.0 * l[0] - 1.0),
            scaled(g[1], 4.0 * l[1] - 1.0),
            scaled(g[2], 4.0 * l[2] - 1.0),
            sum(scaled(g[0], 4.0 * l[1]), scaled(g[1], 4.0 * l[0])),
            sum(scaled(g[1], 4.0 * l[2]), scaled(g[2], 4.0 * l[1])),
            sum(scaled(g[2], 4.0 * l[0]), scaled(g[0], 4.0 * l[2]))};
  }
};

/// Bilinear (Q1) weights of the four corners of the cell containing p:
/// (i, j), (i+1, j), (i, j+1), (i+1, j+1). Returns the lower-left node
/// indices through i and j.
inline std::array<double, 4> cell_bilinear(const DomainSpec& grid, const Vec2& p, int& i, int& j) {
  const double h = grid.h();
  double xi = (p[0] - grid.origin[0]) / h;
  double eta = (p[1] - grid.origin[1]) / h;
  i = std::min(std::max(int(std::floor(xi)), 0), grid.nx - 1);
  j = std::min(std::max(int(std::floor(eta)), 0), grid.ny - 1);
  xi -= i;
  eta -= j;
  return {(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta};
}

}  // namespace tdflow::detail
