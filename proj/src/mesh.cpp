#include "damageid/mesh.hpp"

#include <stdexcept>

namespace damageid {

void DomainSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("domain.dimension must be 1 or 2");
  if (lx <= 0.0 || (dimension == 2 && ly <= 0.0))
    throw std::invalid_argument("domain extents must be positive");
  if (nx < 1 || (dimension == 2 && ny < 1))
    throw std::invalid_argument("domain: at least one element per axis required");
  const int n_edges = dimension == 1 ? 2 : 4;
  int n_clamped = 0, n_traction = 0;
  for (int e = 0; e < n_edges; ++e) {
    if (edges[e] == BoundaryKind::kClamped)
      ++n_clamped;
    else
      ++n_traction;
  }
  if (n_clamped == 0 || n_traction == 0)
    throw std::invalid_argument("domain: both Gamma0 and Gamma1 must be nonempty");
}

namespace {

void flag_edge_nodes(const DomainSpec& spec, Mesh& mesh) {
  const int nx = spec.nx, ny = spec.ny;
  auto node_id = [&](int i, int j) { return j * (nx + 1) + i; };
  auto kind = [&](Edge e) { return spec.edges[static_cast<int>(e)]; };

  if (spec.dimension == 1) {
    if (kind(Edge::kLeft) == BoundaryKind::kClamped)
      mesh.clamped[0] = 1;
    else
      mesh.gamma1_faces.push_back({0, -1});
    if (kind(Edge::kRight) == BoundaryKind::kClamped)
      mesh.clamped[nx] = 1;
    else
      mesh.gamma1_faces.push_back({nx, -1});
    return;
  }

  // 2d: clamped flags win at corners, matching the closed Gamma0 of the model.
  auto handle = [&](Edge e, auto face_nodes) {
    for (int k = 0; k < (e == Edge::kLeft || e == Edge::kRight ? ny : nx); ++k) {
      auto [a, b] = face_nodes(k);
      if (kind(e) == BoundaryKind::kClamped) {
        mesh.clamped[a] = 1;
        mesh.clamped[b] = 1;
      } else {
        mesh.gamma1_faces.push_back({a, b});
      }
    }
  };
  handle(Edge::kBottom, [&](int k) { return std::pair(node_id(k, 0), node_id(k + 1, 0)); });
  handle(Edge::kTop, [&](int k) { return std::pair(node_id(k, ny), node_id(k + 1, ny)); });
  handle(Edge::kLeft, [&](int k) { return std::pair(node_id(0, k), node_id(0, k + 1)); });
  handle(Edge::kRight, [&](int k) { return std::pair(node_id(nx, k), node_id(nx, k + 1)); });
}

}  // namespace

Mesh build_mesh(const DomainSpec& spec) {
  spec.validate();
  Mesh mesh;
  mesh.dim = spec.dimension;
  mesh.nx = spec.nx;
  mesh.ny = spec.dimension == 2 ? spec.ny : 0;
  mesh.hx = spec.lx / spec.nx;
  mesh.hy = spec.dimension == 2 ? spec.ly / spec.ny : 0.0;

  if (spec.dimension == 1) {
    const int n = spec.nx + 1;
    mesh.nodes.resize(n, 1);
    for (int i = 0; i < n; ++i) mesh.nodes(i, 0) = i * mesh.hx;
    mesh.elems.resize(spec.nx, 2);
    for (int e = 0; e < spec.nx; ++e) mesh.elems.row(e) << e, e + 1;
  } else {
    const int n = (spec.nx + 1) * (spec.ny + 1);
    mesh.nodes.resize(n, 2);
    for (int j = 0; j <= spec.ny; ++j)
      for (int i = 0; i <= spec.nx; ++i) {
        const int id = j * (spec.nx + 1) + i;
        mesh.nodes(id, 0) = i * mesh.hx;
        mesh.nodes(id, 1) = j * mesh.hy;
      }
    mesh.elems.resize(spec.nx * spec.ny, 4);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        const int e = j * spec.nx + i;
        const int a = j * (spec.nx + 1) + i;
        // counter-clockwise
        mesh.elems.row(e) << a, a + 1, a + spec.nx + 2, a + spec.nx + 1;
      }
  }

  mesh.clamped.assign(mesh.n_nodes(), 0);
  flag_edge_nodes(spec, mesh);

  mesh.free_of_full.assign(mesh.n_dofs(), -1);
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    if (mesh.clamped[node]) continue;
    for (int c = 0; c < mesh.dim; ++c) {
      mesh.free_of_full[node * mesh.dim + c] = static_cast<int>(mesh.full_of_free.size());
      mesh.full_of_free.push_back(node * mesh.dim + c);
    }
  }
  return mesh;
}

}  // namespace damageid
