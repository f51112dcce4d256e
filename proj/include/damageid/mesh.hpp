#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace damageid {

/// Which kind of boundary condition a boundary face carries.
enum class BoundaryKind : std::uint8_t {
  kClamped,  ///< homogeneous Dirichlet (Gamma0)
  kTraction  ///< Neumann / traction loaded (Gamma1)
};

/// Edges of the reference rectangle, also used for the two ends of an interval
/// (kLeft / kRight only).
enum class Edge : int { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

/// Description of the computational domain: an interval (N=1) or an
/// axis-aligned rectangle (N=2) with an edge-wise split of the boundary into
/// a clamped part and a traction-loaded part.
struct DomainSpec {
  int dimension = 1;
  double lx = 1.0;
  double ly = 1.0;
  int nx = 1;
  int ny = 1;
  /// Boundary kind per edge, indexed by Edge. For dimension==1 only
  /// kLeft/kRight are meaningful.
  std::array<BoundaryKind, 4> edges = {BoundaryKind::kClamped, BoundaryKind::kTraction,
                                       BoundaryKind::kTraction, BoundaryKind::kTraction};

  /// Throws std::invalid_argument if the spec violates its invariants
  /// (dimension in {1,2}, positive extents and element counts, both boundary
  /// parts nonempty).
  void validate() const;
};

/// Structured mesh: segments in 1d, bilinear quads in 2d. Node ordering is
/// lexicographic by coordinates, so meshes are reproducible.
struct Mesh {
  int dim = 1;
  Eigen::MatrixXd nodes;                        ///< n_nodes x dim coordinates
  Eigen::MatrixXi elems;                        ///< n_elems x (2 or 4) connectivity
  std::vector<std::uint8_t> clamped;            ///< per-node Gamma0 flag
  std::vector<std::array<int, 2>> gamma1_faces; ///< traction faces; {node,-1} in 1d
  int quad_order = 2;
  double hx = 0.0, hy = 0.0;
  int nx = 0, ny = 0;

  int n_nodes() const { return static_cast<int>(nodes.rows()); }
  int n_elems() const { return static_cast<int>(elems.rows()); }
  int dofs_per_node() const { return dim; }
  int n_dofs() const { return n_nodes() * dim; }

  /// Free (unconstrained) dof bookkeeping; built by build_mesh.
  std::vector<int> free_of_full;  ///< full dof -> free index or -1
  std::vector<int> full_of_free;  ///< free index -> full dof
  int n_free() const { return static_cast<int>(full_of_free.size()); }
};

/// Builds the structured mesh for a validated DomainSpec.
Mesh build_mesh(const DomainSpec& spec);

}  // namespace damageid
