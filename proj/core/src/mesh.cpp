#include "nitsche/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace nitsche {

Mesh::Mesh(std::vector<Point2> vertices, std::vector<std::array<std::size_t, 3>> triangles,
           BBox bbox)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(triangles_.size()),
      on_boundary_(vertices_.size(), false),
      bbox_(bbox) {
  // An edge is on the boundary iff exactly one triangle references it.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<BoundaryFacet>> edges;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (std::size_t v : tri) {
      if (v >= vertices_.size()) throw std::invalid_argument("Mesh: vertex index out of range");
    }
    if (signed_area(corners(t)) <= 0.0) {
      throw std::invalid_argument("Mesh: triangle with non-positive signed area");
    }
    for (int e = 0; e < 3; ++e) {
      std::size_t a = tri[e];
      std::size_t b = tri[(e + 1) % 3];
      h_ = std::max(h_, norm(vertices_[b] - vertices_[a]));
      edges[std::minmax(a, b)].push_back({t, e});
    }
  }
  for (const auto& [key, owners] : edges) {
    if (owners.size() > 2) throw std::invalid_argument("Mesh: non-manifold edge");
    if (owners.size() == 1) {
      boundary_facets_.push_back(owners.front());
      boundary_edges_[owners.front().triangle].push_back(owners.front().local_edge);
      on_boundary_[key.first] = true;
      on_boundary_[key.second] = true;
    }
  }
  std::sort(boundary_facets_.begin(), boundary_facets_.end(),
            [](const BoundaryFacet& a, const BoundaryFacet& b) {
              return std::pair(a.triangle, a.local_edge) < std::pair(b.triangle, b.local_edge);
            });
  for (auto& list : boundary_edges_) std::sort(list.begin(), list.end());
}

Triangle Mesh::corners(std::size_t t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

std::span<const int> Mesh::boundary_edges_of(std::size_t t) const { return boundary_edges_[t]; }

Mesh build_structured_mesh(std::size_t nx, std::size_t ny, const BBox& bbox, Diagonal diagonal) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("build_structured_mesh: nx, ny must be >= 1");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0) || !std::isfinite(bbox.area())) {
    throw std::invalid_argument("build_structured_mesh: degenerate bounding box");
  }

  std::vector<Point2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    // Exact end points so that boundary vertices sit on the bbox.
    double y = j == ny ? bbox.ymax : bbox.ymin + bbox.height() * double(j) / double(ny);
    for (std::size_t i = 0; i <= nx; ++i) {
      double x = i == nx ? bbox.xmax : bbox.xmin + bbox.width() * double(i) / double(nx);
      vertices.push_back({x, y});
    }
  }

  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      std::size_t v00 = j * (nx + 1) + i;
      std::size_t v10 = v00 + 1;
      std::size_t v01 = v00 + nx + 1;
      std::size_t v11 = v01 + 1;
      if (diagonal == Diagonal::LowerLeftUpperRight) {
        triangles.push_back({v00, v10, v11});
        triangles.push_back({v00, v11, v01});
      } else {
        triangles.push_back({v00, v10, v01});
        triangles.push_back({v10, v11, v01});
      }
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), bbox);
}

ElementGeometry triangle_geometry(const Triangle& c) {
  ElementGeometry g;
  g.area = signed_area(c);
  g.origin = c[0];
  g.jacobian << c[1].x - c[0].x, c[2].x - c[0].x,
                c[1].y - c[0].y, c[2].y - c[0].y;
  for (int e = 0; e < 3; ++e) {
    Point2 d = c[(e + 1) % 3] - c[e];
    double len = norm(d);
    g.edge_lengths[e] = len;
    g.normals[e] = {d.y / len, -d.x / len};
  }
  return g;
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t t) {
  return triangle_geometry(mesh.corners(t));
}

void write_text(const Mesh& mesh, std::ostream& out) {
  auto flags = out.flags();
  auto precision = out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << '\n';
  for (const auto& t : mesh.triangles()) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(precision);
  out.flags(flags);
}

}  // namespace nitsche
