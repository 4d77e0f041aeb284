#include "nitsche/spaces.hpp"

#include <algorithm>
#include <stdexcept>

namespace nitsche {

DofMap build_cg_dofmap(const Mesh& mesh) {
  DofMap map;
  map.n_dofs = mesh.n_vertices();
  map.element_dofs.assign(mesh.triangles().begin(), mesh.triangles().end());
  for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.on_boundary(v)) map.boundary_dofs.push_back(v);
  }
  return map;
}

CutDofMap::CutDofMap(DofMap base, std::vector<std::array<bool, 2>> active)
    : base_(std::move(base)), active_(std::move(active)) {
  index_.assign(active_.size(), {kInactiveDof, kInactiveDof});
  for (int domain = 0; domain < 2; ++domain) {
    for (std::size_t v = 0; v < active_.size(); ++v) {
      if (active_[v][domain]) index_[v][domain] = n_dofs_++;
    }
  }
}

std::array<std::size_t, 3> CutDofMap::element_dofs(std::size_t t, int domain) const {
  const auto& verts = base_.element_dofs[t];
  return {index_[verts[0]][domain], index_[verts[1]][domain], index_[verts[2]][domain]};
}

std::size_t CutDofMap::n_doubled() const {
  return std::size_t(std::count_if(active_.begin(), active_.end(),
                                   [](const auto& a) { return a[0] && a[1]; }));
}

CutDofMap build_cut_dofmap(const Mesh& mesh, std::span<const CutInfo> cuts) {
  if (cuts.size() != mesh.n_triangles()) {
    throw std::invalid_argument("build_cut_dofmap: one CutInfo per element required");
  }
  std::vector<std::array<bool, 2>> active(mesh.n_vertices(), {false, false});
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    Side side = cuts[t].classification;
    for (std::size_t v : mesh.triangles()[t]) {
      if (side != Side::Positive) active[v][0] = true;
      if (side != Side::Negative) active[v][1] = true;
    }
  }
  return CutDofMap(build_cg_dofmap(mesh), std::move(active));
}

Constraints boundary_constraints(const Mesh& mesh, const DofMap& dofs,
                                 const std::function<double(Point2)>& g) {
  Constraints c;
  for (std::size_t v : dofs.boundary_dofs) {
    c.dofs.push_back(v);
    c.values.push_back(g(mesh.vertices()[v]));
  }
  return c;
}

Constraints boundary_constraints(const Mesh& mesh, const CutDofMap& dofs,
                                 const std::function<double(Point2, int)>& g) {
  Constraints c;
  for (std::size_t v : dofs.base().boundary_dofs) {
    for (int domain = 0; domain < 2; ++domain) {
      if (!dofs.active(v, domain)) continue;
      c.dofs.push_back(dofs.dof(v, domain));
      c.values.push_back(g(mesh.vertices()[v], domain));
    }
  }
  return c;
}

std::vector<double> ReducedSystem::expand(std::span<const double> reduced) const {
  if (reduced.size() != free_dofs.size()) throw std::invalid_argument("ReducedSystem::expand: size mismatch");
  std::vector<double> full = constrained_values;
  for (std::size_t k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = reduced[k];
  return full;
}

ReducedSystem apply_essential_bc(const GlobalSystem& system, const Constraints& constraints) {
  const std::size_t n = system.matrix.size();
  if (constraints.dofs.size() != constraints.values.size()) {
    throw std::invalid_argument("apply_essential_bc: dofs/values size mismatch");
  }
  ReducedSystem out;
  out.is_constrained.assign(n, false);
  out.constrained_values.assign(n, 0.0);
  for (std::size_t k = 0; k < constraints.dofs.size(); ++k) {
    std::size_t d = constraints.dofs[k];
    if (d >= n) throw std::out_of_range("apply_essential_bc: constrained dof out of range");
    out.is_constrained[d] = true;
    out.constrained_values[d] = constraints.values[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.is_constrained[i]) out.free_dofs.push_back(i);
  }
  if (out.free_dofs.empty()) throw std::invalid_argument("apply_essential_bc: every dof is constrained");

  // b_f - M_fc g_c
  auto lifted = system.matrix * std::span<const double>(out.constrained_values);
  out.system.matrix = system.matrix.principal_submatrix(out.free_dofs);
  out.system.rhs.reserve(out.free_dofs.size());
  for (std::size_t i : out.free_dofs) out.system.rhs.push_back(system.rhs[i] - lifted[i]);
  return out;
}

}  // namespace nitsche
