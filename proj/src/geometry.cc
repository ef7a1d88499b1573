// Copyright 2026 The UFTrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uft/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uft/error.h"

namespace uft {

namespace {

constexpr double kShapeTolerance = 1e-6;
constexpr double kMinSide = 1e-9;
constexpr double kQuarterTurn = 0.5 * std::numbers::pi;

Point2 Sub(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
double Dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
double Cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
double Norm(const Point2& a) { return std::hypot(a.x, a.y); }

// Cross product of (a - o) and (b - o).
double Turn(const Point2& o, const Point2& a, const Point2& b) {
  return Cross(Sub(a, o), Sub(b, o));
}

std::vector<Point2> CounterClockwise(const RotBox& box) {
  std::vector<Point2> poly(box.corners.begin(), box.corners.end());
  if (SignedArea(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  return poly;
}

Point2 LineIntersection(const Point2& p, const Point2& q, const Point2& a,
                        const Point2& b) {
  const Point2 r = Sub(q, p);
  const Point2 s = Sub(b, a);
  const double denom = Cross(r, s);
  if (denom == 0.0) return q;
  const double t = Cross(Sub(a, p), s) / denom;
  return {p.x + t * r.x, p.y + t * r.y};
}

// Folds an angle in radians onto [0, pi/2).
double FoldQuarterTurn(double angle) {
  double folded = std::fmod(angle, kQuarterTurn);
  if (folded < 0.0) folded += kQuarterTurn;
  if (kQuarterTurn - folded < 1e-12) folded = 0.0;
  return folded;
}

std::vector<Point2> ForegroundCenters(const BinaryMask& mask) {
  std::vector<Point2> points;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (mask.at(r, c)) points.push_back({double(c), double(r)});
    }
  }
  if (points.empty()) ThrowInvalid("empty mask");
  return points;
}

struct OrientedExtent {
  double angle = 0.0;
  double min_u = 0.0, max_u = 0.0, min_v = 0.0, max_v = 0.0;

  double InflatedArea() const {
    return (max_u - min_u + 1.0) * (max_v - min_v + 1.0);
  }
};

OrientedExtent ExtentAt(const std::vector<Point2>& hull, double angle) {
  const Point2 u{std::cos(angle), std::sin(angle)};
  const Point2 v{-u.y, u.x};
  OrientedExtent e;
  e.angle = angle;
  e.min_u = e.min_v = std::numeric_limits<double>::infinity();
  e.max_u = e.max_v = -std::numeric_limits<double>::infinity();
  for (const Point2& p : hull) {
    const double a = Dot(p, u);
    const double b = Dot(p, v);
    e.min_u = std::min(e.min_u, a);
    e.max_u = std::max(e.max_u, a);
    e.min_v = std::min(e.min_v, b);
    e.max_v = std::max(e.max_v, b);
  }
  return e;
}

}  // namespace

Point2 RotBox::center() const {
  Point2 c;
  for (const Point2& p : corners) {
    c.x += 0.25 * p.x;
    c.y += 0.25 * p.y;
  }
  return c;
}

double RotBox::area() const { return std::abs(SignedArea(corners)); }

double RotBox::angle_degrees() const {
  const Point2 e = Sub(corners[1], corners[0]);
  return FoldQuarterTurn(std::atan2(e.y, e.x)) * 180.0 / std::numbers::pi;
}

RotBox ToRotBox(const AABox& box) {
  return RotBox{{Point2{box.left(), box.top()}, Point2{box.right(), box.top()},
                 Point2{box.right(), box.bottom()},
                 Point2{box.left(), box.bottom()}}};
}

AABox BoundingBox(const RotBox& box) {
  double left = box.corners[0].x, right = left;
  double top = box.corners[0].y, bottom = top;
  for (const Point2& p : box.corners) {
    left = std::min(left, p.x);
    right = std::max(right, p.x);
    top = std::min(top, p.y);
    bottom = std::max(bottom, p.y);
  }
  return AABox::FromEdges(left, top, right, bottom);
}

void ValidateRotBox(const RotBox& box) {
  std::array<Point2, 4> edges;
  for (int i = 0; i < 4; ++i) {
    edges[i] = Sub(box.corners[(i + 1) % 4], box.corners[i]);
    if (!std::isfinite(edges[i].x) || !std::isfinite(edges[i].y) ||
        Norm(edges[i]) < kMinSide) {
      ThrowInvalid("degenerate geometry");
    }
  }
  if (std::abs(Norm(edges[0]) - Norm(edges[2])) > kShapeTolerance ||
      std::abs(Norm(edges[1]) - Norm(edges[3])) > kShapeTolerance) {
    ThrowInvalid("degenerate geometry");
  }
  for (int i = 0; i < 4; ++i) {
    const Point2& a = edges[i];
    const Point2& b = edges[(i + 1) % 4];
    if (std::abs(Dot(a, b)) / (Norm(a) * Norm(b)) > kShapeTolerance) {
      ThrowInvalid("degenerate geometry");
    }
  }
}

double IouAxisAligned(const AABox& a, const AABox& b) {
  const double iw =
      std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih =
      std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double SignedArea(std::span<const Point2> polygon) {
  const size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    twice += Cross(polygon[i], polygon[(i + 1) % n]);
  }
  return 0.5 * twice;
}

std::vector<Point2> ConvexHull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point2& a, const Point2& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  if (points.size() < 3) return points;

  std::vector<Point2> hull(2 * points.size());
  size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && Turn(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = points[i];
    while (k >= lower && Turn(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Point2> ClipConvex(const std::vector<Point2>& subject,
                               const std::vector<Point2>& clip) {
  std::vector<Point2> output = subject;
  for (size_t i = 0; i < clip.size() && !output.empty(); ++i) {
    const Point2& a = clip[i];
    const Point2& b = clip[(i + 1) % clip.size()];
    std::vector<Point2> input;
    input.swap(output);
    for (size_t j = 0; j < input.size(); ++j) {
      const Point2& cur = input[j];
      const Point2& prev = input[(j + input.size() - 1) % input.size()];
      const bool cur_in = Turn(a, b, cur) >= 0.0;
      const bool prev_in = Turn(a, b, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) output.push_back(LineIntersection(prev, cur, a, b));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(LineIntersection(prev, cur, a, b));
      }
    }
  }
  return output;
}

double PolygonOverlap(const RotBox& a, const RotBox& b) {
  ValidateRotBox(a);
  ValidateRotBox(b);
  const std::vector<Point2> pa = CounterClockwise(a);
  const std::vector<Point2> pb = CounterClockwise(b);
  const double area_a = SignedArea(pa);
  const double area_b = SignedArea(pb);
  const double inter = std::max(0.0, SignedArea(ClipConvex(pa, pb)));
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

RotBox MbrOfMask(const BinaryMask& mask) {
  const std::vector<Point2> hull = ConvexHull(ForegroundCenters(mask));

  // Candidate orientations: every hull edge (the classic rotating-calipers
  // set) plus the axis-aligned frame, so the result never exceeds the ALB.
  std::vector<double> angles{0.0};
  for (size_t i = 0; hull.size() > 1 && i < hull.size(); ++i) {
    const Point2 e = Sub(hull[(i + 1) % hull.size()], hull[i]);
    angles.push_back(FoldQuarterTurn(std::atan2(e.y, e.x)));
  }
  std::sort(angles.begin(), angles.end());

  OrientedExtent best = ExtentAt(hull, angles.front());
  for (double angle : angles) {
    const OrientedExtent e = ExtentAt(hull, angle);
    // Ascending angles: only a strictly smaller area replaces the incumbent,
    // so ties keep the smallest angle.
    if (e.InflatedArea() < best.InflatedArea() * (1.0 - 1e-12)) best = e;
  }

  const Point2 u{std::cos(best.angle), std::sin(best.angle)};
  const Point2 v{-u.y, u.x};
  const double u0 = best.min_u - 0.5, u1 = best.max_u + 0.5;
  const double v0 = best.min_v - 0.5, v1 = best.max_v + 0.5;
  auto at = [&](double a, double b) {
    return Point2{a * u.x + b * v.x, a * u.y + b * v.y};
  };
  return RotBox{{at(u0, v0), at(u1, v0), at(u1, v1), at(u0, v1)}};
}

AABox AlbOfMask(const BinaryMask& mask) {
  int min_r = mask.height(), max_r = -1, min_c = mask.width(), max_c = -1;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c)) continue;
      min_r = std::min(min_r, r);
      max_r = std::max(max_r, r);
      min_c = std::min(min_c, c);
      max_c = std::max(max_c, c);
    }
  }
  if (max_r < 0) ThrowInvalid("empty mask");
  return AABox::FromEdges(min_c - 0.5, min_r - 0.5, max_c + 0.5, max_r + 0.5);
}

BinaryMask FillBox(const AABox& box, int width, int height) {
  BinaryMask out(width, height);
  const int c0 = std::max(0, static_cast<int>(std::floor(box.left())));
  const int c1 = std::min(width - 1, static_cast<int>(std::ceil(box.right())));
  const int r0 = std::max(0, static_cast<int>(std::floor(box.top())));
  const int r1 =
      std::min(height - 1, static_cast<int>(std::ceil(box.bottom())));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (c > box.left() && c < box.right() && r > box.top() &&
          r < box.bottom()) {
        out.set(r, c, true);
      }
    }
  }
  return out;
}

BinaryMask FillRotBox(const RotBox& box, int width, int height) {
  const std::vector<Point2> poly = CounterClockwise(box);
  const AABox bounds = BoundingBox(box);
  BinaryMask out(width, height);
  const int c0 = std::max(0, static_cast<int>(std::floor(bounds.left())));
  const int c1 =
      std::min(width - 1, static_cast<int>(std::ceil(bounds.right())));
  const int r0 = std::max(0, static_cast<int>(std::floor(bounds.top())));
  const int r1 =
      std::min(height - 1, static_cast<int>(std::ceil(bounds.bottom())));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const Point2 p{double(c), double(r)};
      bool inside = true;
      for (size_t i = 0; i < poly.size() && inside; ++i) {
        inside = Turn(poly[i], poly[(i + 1) % poly.size()], p) > 1e-9;
      }
      if (inside) out.set(r, c, true);
    }
  }
  return out;
}

}  // namespace uft
