#include "metascreen/boundary.hpp"

#include <cmath>

#include "metascreen/errors.hpp"

namespace metascreen {

void BubbleGeometry::validate(const Lattice& lat) const {
  if (shape == Shape::circle) {
    if (!(radius > 0.0)) throw ConfigError("bubble radius must be positive");
  } else {
    if (!(semi_x > 0.0) || !(semi_y > 0.0))
      throw ConfigError("ellipse semi-axes must be positive");
  }
  if (!(standoff > halfheight()))
    throw ConfigError("bubble must lie strictly above the plane (standoff > vertical semi-axis)");
  if (!(2.0 * halfwidth() < lat.period))
    throw ConfigError("bubble must fit inside one lattice cell (2 r < a)");
}

DiscreteBoundary discretize(const BubbleGeometry& geom, int n_nodes) {
  if (n_nodes < 16 || n_nodes % 2 != 0)
    throw ConfigError("discretize: node count must be even and >= 16");

  const double A = geom.shape == BubbleGeometry::Shape::circle ? geom.radius : geom.semi_x;
  const double B = geom.shape == BubbleGeometry::Shape::circle ? geom.radius : geom.semi_y;
  const double beta = geom.standoff;

  DiscreteBoundary b;
  b.nodes.resize(2, n_nodes);
  b.normals.resize(2, n_nodes);
  b.weights.resize(n_nodes);
  b.speeds.resize(n_nodes);
  b.curvatures.resize(n_nodes);
  b.params.resize(n_nodes);

  const double h = 2.0 * M_PI / n_nodes;
  for (int j = 0; j < n_nodes; ++j) {
    double t = h * j;
    double c = std::cos(t), s = std::sin(t);
    double speed = std::sqrt(A * A * s * s + B * B * c * c);
    b.params[j] = t;
    b.nodes.col(j) = Eigen::Vector2d(A * c, beta + B * s);
    b.normals.col(j) = Eigen::Vector2d(B * c, A * s) / speed;
    b.speeds[j] = speed;
    b.weights[j] = speed * h;
    b.curvatures[j] = A * B / (speed * speed * speed);
  }

  // outward orientation check against the center
  for (int j = 0; j < n_nodes; ++j) {
    Eigen::Vector2d rel = b.nodes.col(j) - Eigen::Vector2d(0.0, beta);
    if (rel.dot(b.normals.col(j)) <= 0.0)
      throw ConfigError("discretize: normals are not outward");
  }
  if (b.nodes.row(1).minCoeff() <= 0.0)
    throw ConfigError("discretize: boundary touches the plane");

  // |D| = \oint x_d nu_d dsigma
  double area = 0.0;
  for (int j = 0; j < n_nodes; ++j)
    area += b.weights[j] * b.nodes(1, j) * b.normals(1, j);
  b.area = area;
  return b;
}

}  // namespace metascreen
