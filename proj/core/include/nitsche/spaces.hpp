#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nitsche/cut_geometry.hpp"
#include "nitsche/linalg.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

inline constexpr std::size_t kInactiveDof = std::numeric_limits<std::size_t>::max();

/// Continuous P1 dofs: one per vertex, numbered like the vertices.
struct DofMap {
  std::size_t n_dofs = 0;
  std::vector<std::array<std::size_t, 3>> element_dofs;
  std::vector<std::size_t> boundary_dofs;
};

DofMap build_cg_dofmap(const Mesh& mesh);

/// Dofs of V_h = V_h^1 + V_h^2: a vertex carries one dof for each domain
/// touched by an adjacent element (cut elements touch both).
class CutDofMap {
 public:
  CutDofMap(DofMap base, std::vector<std::array<bool, 2>> active);

  [[nodiscard]] const DofMap& base() const { return base_; }
  [[nodiscard]] std::size_t n_dofs() const { return n_dofs_; }
  [[nodiscard]] bool active(std::size_t vertex, int domain) const { return active_[vertex][domain]; }
  /// Global index of (vertex, domain), kInactiveDof if inactive.
  [[nodiscard]] std::size_t dof(std::size_t vertex, int domain) const { return index_[vertex][domain]; }
  [[nodiscard]] std::array<std::size_t, 3> element_dofs(std::size_t t, int domain) const;
  [[nodiscard]] std::size_t n_doubled() const;

 private:
  DofMap base_;
  std::vector<std::array<bool, 2>> active_;
  std::vector<std::array<std::size_t, 2>> index_;
  std::size_t n_dofs_ = 0;
};

/// Domain-1 dofs in vertex order, then domain-2 dofs in vertex order.
CutDofMap build_cut_dofmap(const Mesh& mesh, std::span<const CutInfo> cuts);

/// Dofs fixed to prescribed values.
struct Constraints {
  std::vector<std::size_t> dofs;
  std::vector<double> values;
};

/// Nodal interpolation of g at the boundary vertices.
Constraints boundary_constraints(const Mesh& mesh, const DofMap& dofs,
                                 const std::function<double(Point2)>& g);

/// Every active dof at a boundary vertex is constrained, fictitious ones
/// included: their basis functions still have a trace on the boundary part
/// of their own domain. g(p, domain) evaluates that domain's data.
Constraints boundary_constraints(const Mesh& mesh, const CutDofMap& dofs,
                                 const std::function<double(Point2, int)>& g);

/// System on the unconstrained dofs after symmetric elimination.
struct ReducedSystem {
  GlobalSystem system;
  std::vector<std::size_t> free_dofs;
  std::vector<double> constrained_values;  // full-length; constrained entries set
  std::vector<bool> is_constrained;

  /// Full-space vector from a solution on the free dofs.
  [[nodiscard]] std::vector<double> expand(std::span<const double> reduced) const;
};

/// Throws std::invalid_argument if every dof is constrained.
ReducedSystem apply_essential_bc(const GlobalSystem& system, const Constraints& constraints);

}  // namespace nitsche
