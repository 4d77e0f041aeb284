#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nitsche/mesh.hpp"
#include "nitsche/quadrature.hpp"

namespace nitsche {

/// Element classification. Negative is domain 1 (index 0), Positive is domain 2 (index 1).
enum class Side { Negative, Positive, Cut };

class DegenerateLevelSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A level set function; geometry only ever sees its P1 interpolant.
class LevelSet {
 public:
  using Function = std::function<double(Point2)>;

  explicit LevelSet(Function phi) : phi_(std::move(phi)) {}

  double operator()(Point2 p) const { return phi_(p); }
  /// Values at the mesh vertices.
  [[nodiscard]] std::vector<double> vertex_values(const Mesh& mesh) const;

 private:
  Function phi_;
};

/// (x^4 + y^4)^(1/4) - 1: negative inside the unit l4-ball.
LevelSet levelset_l4_norm();
/// a*x + b*y + c.
LevelSet levelset_planar(double a, double b, double c);

/// Straight piece of the reconstructed interface inside one element.
struct InterfaceSegment {
  Point2 p;
  Point2 q;
  /// Unit normal pointing from the negative to the positive side.
  Point2 normal;
  double length = 0.0;
};

struct CutInfo {
  Side classification = Side::Positive;
  std::vector<Triangle> sub_triangles_neg;
  std::vector<Triangle> sub_triangles_pos;
  std::optional<InterfaceSegment> segment;
  /// kappa[i] = |T_i| / |T|.
  std::array<double, 2> kappa{0.0, 1.0};
  std::array<double, 2> sub_areas{0.0, 0.0};

  [[nodiscard]] const std::vector<Triangle>& sub_triangles(int domain) const {
    return domain == 0 ? sub_triangles_neg : sub_triangles_pos;
  }
  [[nodiscard]] bool is_cut() const { return classification == Side::Cut; }
};

/// Values whose magnitude is below this fraction of h are pushed to the positive side.
inline constexpr double kSnapTolerance = 1e-12;

/// Cuts one triangle by the linear interpolant of the given vertex values.
/// `h` sets the snapping scale.
CutInfo cut_triangle(const Triangle& corners, std::array<double, 3> values, double h);

CutInfo classify_and_cut(const Mesh& mesh, std::size_t t, std::span<const double> vertex_values);
std::vector<CutInfo> classify_and_cut(const Mesh& mesh, std::span<const double> vertex_values);
std::vector<CutInfo> classify_and_cut(const Mesh& mesh, const LevelSet& levelset);

/// Vertex value after snapping; its sign decides the vertex's domain.
double snapped_value(double value, double h);

struct InterfacePoint {
  Point2 point;
  double weight = 0.0;
  Point2 normal;
};

/// Maps a segment rule onto the element's interface segment.
std::vector<InterfacePoint> interface_quadrature(const CutInfo& info, const QuadRule& rule);

}  // namespace nitsche
