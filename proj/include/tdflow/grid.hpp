#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tdflow {

using Vec2 = std::array<double, 2>;
using VectorFunction = std::function<Vec2(const Vec2&)>;

/// Axis-aligned rectangle split into nx * ny square cells of side h.
struct DomainSpec {
  Vec2 origin{0.0, 0.0};
  Vec2 extent{1.0, 1.0};
  int nx = 2;
  int ny = 2;

  double h() const { return extent[0] / nx; }
  int nodes_x() const { return nx + 1; }
  int nodes_y() const { return ny + 1; }
  int node_count() const { return nodes_x() * nodes_y(); }
  /// Row-major node index, x fastest.
  int node(int i, int j) const { return j * nodes_x() + i; }
  Vec2 node_position(int i, int j) const {
    return {origin[0] + i * h(), origin[1] + j * h()};
  }

  /// Throws ConfigError unless the cell counts are >= 1, the extent is
  /// positive and the cells are square to 1e-12 relative.
  void validate() const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

enum class Side : std::uint8_t { left, right, bottom, top };

const char* to_string(Side side);
Side side_from_string(const std::string& name);

/// An interval on one side of the rectangle, identified by its center
/// coordinate along the side and its length. Boundary edges whose midpoint
/// falls inside the interval receive `tag`.
struct BoundarySegment {
  Side side = Side::left;
  double center = 0.5;
  double length = 1.0;
  std::string tag;
};

inline constexpr const char* kWallTag = "wall";

struct BoundaryEdge {
  std::array<int, 2> vertices{};  // counter-clockwise along the boundary
  int edge = -1;                  // index into Mesh::edges
  Side side = Side::left;
  std::string tag;

  Vec2 outward_normal() const;
};

struct Mesh {
  DomainSpec domain;
  std::vector<Vec2> vertices;
  /// Counter-clockwise vertex triples. Cell (i, j) owns triangles 2c and
  /// 2c + 1 with c = j * nx + i: the lower-right and upper-left halves of the
  /// bottom-left to top-right diagonal split.
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  /// Local edges (v0 v1), (v1 v2), (v2 v0) of each triangle.
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<BoundaryEdge> boundary_edges;

  /// Distinct boundary tags in first-appearance order.
  std::vector<std::string> tags() const;

  /// Triangle containing p (clamped into the domain) and the barycentric
  /// coordinates of p in it.
  int locate(const Vec2& p, std::array<double, 3>& barycentric) const;
};

Mesh build_mesh(const DomainSpec& spec, std::span<const BoundarySegment> segments = {});

/// The union of boundary edges build_mesh assigns to a segment, as an
/// interval [lo, hi] along the side (absolute coordinates). Empty segments
/// return lo == hi.
std::pair<double, double> snapped_interval(const DomainSpec& spec, const BoundarySegment& segment);

struct BoundaryCondition {
  enum class Kind : std::uint8_t { dirichlet, neumann };
  Kind kind = Kind::dirichlet;
  /// Prescribed velocity (Dirichlet) or traction (mu grad u - p I) n (Neumann).
  /// An empty function means zero.
  VectorFunction value;

  static BoundaryCondition dirichlet(VectorFunction velocity = {}) {
    return {Kind::dirichlet, std::move(velocity)};
  }
  static BoundaryCondition neumann(VectorFunction traction = {}) {
    return {Kind::neumann, std::move(traction)};
  }
};

using BoundarySpec = std::vector<std::pair<std::string, BoundaryCondition>>;

struct NeumannEdge {
  int boundary_edge = -1;
  std::array<int, 3> nodes{};  // P2 nodes: endpoints then midpoint
  Vec2 normal{};
  double length = 0.0;
  VectorFunction traction;  // empty for homogeneous data
};

/// Taylor-Hood P2/P1 degrees of freedom. P2 nodes are the mesh vertices
/// (same indices) followed by one node per mesh edge. Velocity dof of node n
/// and component c is 2 * n + c; pressure dofs are the vertices.
struct DofMap {
  int vertex_count = 0;
  int edge_count = 0;
  std::vector<Vec2> p2_nodes;
  /// P2 nodes of each triangle: its vertices, then the midpoints of its
  /// local edges (v0 v1), (v1 v2), (v2 v0).
  std::vector<std::array<int, 6>> element_nodes;
  std::vector<std::uint8_t> dirichlet_mask;  // per velocity dof
  std::vector<double> dirichlet_value;       // per velocity dof, 0 where free
  std::vector<NeumannEdge> neumann_edges;

  int p2_count() const { return vertex_count + edge_count; }
  int velocity_dof_count() const { return 2 * p2_count(); }
  int pressure_dof_count() const { return vertex_count; }
  int dirichlet_count() const;
  bool has_neumann() const { return !neumann_edges.empty(); }
};

/// Resolves every mesh boundary tag against exactly one condition. A P2
/// node shared by edges of several Dirichlet tags takes the value of the
/// condition listed last; Dirichlet always wins over Neumann.
DofMap build_dofmap(const Mesh& mesh, const BoundarySpec& boundary_spec);

}  // namespace tdflow
