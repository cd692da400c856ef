#pragma once

#include <Eigen/Dense>

#include "metascreen/lattice.hpp"

namespace metascreen {

// Bubble cross-section mounted at height `standoff` above the plane x_d = 0.
// The boundary must stay strictly inside the upper half plane and inside one
// lattice cell.
struct BubbleGeometry {
  enum class Shape { circle, ellipse };

  Shape shape = Shape::circle;
  double radius = 1.0;   // circle
  double semi_x = 1.0;   // ellipse semi-axes
  double semi_y = 0.5;
  double standoff = 2.0;

  double halfwidth() const { return shape == Shape::circle ? radius : semi_x; }
  double halfheight() const { return shape == Shape::circle ? radius : semi_y; }

  void validate(const Lattice& lat) const;
};

// Nystrom data on the closed boundary curve: equispaced-in-parameter nodes
// with trapezoidal arclength weights (spectrally accurate on smooth curves),
// outward unit normals, parametric speeds and signed curvatures.
struct DiscreteBoundary {
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix2Xd normals;
  Eigen::VectorXd weights;     // arclength quadrature weights
  Eigen::VectorXd speeds;      // |x'(t_j)|
  Eigen::VectorXd curvatures;
  Eigen::VectorXd params;      // t_j in [0, 2 pi)
  double area = 0.0;           // enclosed area from the divergence identity

  int size() const { return static_cast<int>(weights.size()); }
  double perimeter() const { return weights.sum(); }
};

DiscreteBoundary discretize(const BubbleGeometry& geom, int n_nodes);

}  // namespace metascreen
