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

#ifndef UFT_GEOMETRY_H_
#define UFT_GEOMETRY_H_

#include <array>
#include <span>
#include <vector>

#include "uft/grid.h"

namespace uft {

// x = column, y = row.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box given by center and extent, in pixels.
struct AABox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return cx - 0.5 * w; }
  double right() const { return cx + 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  static AABox FromEdges(double left, double top, double right,
                         double bottom) {
    return {0.5 * (left + right), 0.5 * (top + bottom), right - left,
            bottom - top};
  }
};

// Rectangle of arbitrary orientation, four corners in winding order.
struct RotBox {
  std::array<Point2, 4> corners;

  Point2 center() const;
  double area() const;
  // Orientation of the first edge, normalized to [0, 90) degrees.
  double angle_degrees() const;
};

RotBox ToRotBox(const AABox& box);
// Tightest axis-aligned box around the corners.
AABox BoundingBox(const RotBox& box);

// Throws kInvalidArgument("degenerate geometry") unless the corners form a
// rectangle with nonzero sides.
void ValidateRotBox(const RotBox& box);

// Intersection over union of two axis-aligned boxes. Disjoint boxes give 0.
double IouAxisAligned(const AABox& a, const AABox& b);

// Intersection over union of two rotated rectangles via convex clipping.
double PolygonOverlap(const RotBox& a, const RotBox& b);

// Signed shoelace area; positive for counter-clockwise in a y-up frame.
double SignedArea(std::span<const Point2> polygon);

// Andrew's monotone chain. Returns vertices counter-clockwise (y-up sense)
// without collinear points. Degenerate inputs yield 1 or 2 points.
std::vector<Point2> ConvexHull(std::vector<Point2> points);

// Sutherland-Hodgman clip of a convex subject against a convex clip polygon.
// Both inputs must share the same (positive) orientation.
std::vector<Point2> ClipConvex(const std::vector<Point2>& subject,
                               const std::vector<Point2>& clip);

// Minimum-area rotated rectangle around the foreground pixel centers,
// grown by half a pixel on every side. Throws "empty mask".
RotBox MbrOfMask(const BinaryMask& mask);

// Axis-aligned bounds of the foreground pixel centers, grown by half a pixel.
// Throws "empty mask".
AABox AlbOfMask(const BinaryMask& mask);

// Pixels whose centers lie strictly inside the box (or rectangle).
BinaryMask FillBox(const AABox& box, int width, int height);
BinaryMask FillRotBox(const RotBox& box, int width, int height);

}  // namespace uft

#endif  // UFT_GEOMETRY_H_
