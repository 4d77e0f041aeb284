#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nitsche {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 2D cross product.
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

using Triangle = std::array<Point2, 3>;

/// Signed area, positive for counterclockwise vertex order.
constexpr double signed_area(const Triangle& t) {
  return 0.5 * cross(t[1] - t[0], t[2] - t[0]);
}

struct BBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 1.0;
  double ymax = 1.0;

  [[nodiscard]] double width() const { return xmax - xmin; }
  [[nodiscard]] double height() const { return ymax - ymin; }
  [[nodiscard]] double area() const { return width() * height(); }
};

/// A boundary edge: local edge e of a triangle joins local vertices e and (e+1)%3.
struct BoundaryFacet {
  std::size_t triangle = 0;
  int local_edge = 0;
};

/// Split direction of every grid cell.
enum class Diagonal {
  LowerLeftUpperRight,
  UpperLeftLowerRight,
};

/// Immutable triangulation of an axis-aligned rectangle.
class Mesh {
 public:
  Mesh(std::vector<Point2> vertices, std::vector<std::array<std::size_t, 3>> triangles,
       BBox bbox);

  [[nodiscard]] std::span<const Point2> vertices() const { return vertices_; }
  [[nodiscard]] std::span<const std::array<std::size_t, 3>> triangles() const {
    return triangles_;
  }
  [[nodiscard]] std::span<const BoundaryFacet> boundary_facets() const {
    return boundary_facets_;
  }
  [[nodiscard]] const BBox& bbox() const { return bbox_; }
  /// Maximum edge length over the mesh.
  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] std::size_t n_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t n_triangles() const { return triangles_.size(); }

  [[nodiscard]] Triangle corners(std::size_t t) const;
  /// Local edge indices of triangle t that lie on the outer boundary.
  [[nodiscard]] std::span<const int> boundary_edges_of(std::size_t t) const;
  [[nodiscard]] bool on_boundary(std::size_t vertex) const { return on_boundary_[vertex]; }

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<BoundaryFacet> boundary_facets_;
  std::vector<std::vector<int>> boundary_edges_;
  std::vector<bool> on_boundary_;
  BBox bbox_;
  double h_ = 0.0;
};

/// nx-by-ny grid of cells, each split into two triangles along the same diagonal.
Mesh build_structured_mesh(std::size_t nx, std::size_t ny, const BBox& bbox,
                           Diagonal diagonal = Diagonal::LowerLeftUpperRight);

struct ElementGeometry {
  double area = 0.0;
  std::array<double, 3> edge_lengths{};
  /// Outward unit normal of local edge e (vertices e, e+1).
  std::array<Point2, 3> normals{};
  /// x = origin + jacobian * (xi, eta).
  Point2 origin;
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();

  [[nodiscard]] Point2 map(double xi, double eta) const {
    return {origin.x + jacobian(0, 0) * xi + jacobian(0, 1) * eta,
            origin.y + jacobian(1, 0) * xi + jacobian(1, 1) * eta};
  }
  [[nodiscard]] Eigen::Matrix2d inverse_transpose() const {
    return jacobian.inverse().transpose();
  }
};

ElementGeometry triangle_geometry(const Triangle& corners);
ElementGeometry element_geometry(const Mesh& mesh, std::size_t t);

/// Plain-text dump: "v x y" per vertex, then "t i j k" per triangle (0-based).
void write_text(const Mesh& mesh, std::ostream& out);

}  // namespace nitsche
