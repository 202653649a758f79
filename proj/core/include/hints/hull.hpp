#pragma once

#include <span>
#include <vector>

#include "hints/geometry.hpp"

namespace hints {

struct HullOptions {
    double padding = 0.01;  // offset of the 3x3 point grid around each input point
    int max_k = 24;         // neighborhood cap before falling back to the convex hull
};

/// k-nearest-neighbor concave hull (Moreira and Santos) run on the input
/// points padded by a 3x3 grid each. Returns a counter-clockwise simple
/// polygon strictly containing every input point. One or two points yield
/// their padded bounding box.
std::vector<Point> concave_hull(std::span<const Point> points, const HullOptions& options = {});

/// The unpadded k-NN hull for a fixed k. Empty when k fails (self
/// intersection or points left outside).
std::vector<Point> knn_concave_hull(std::span<const Point> points, int k);

}  // namespace hints
