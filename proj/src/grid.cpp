#include "tdflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tdflow/error.hpp"

namespace tdflow {

void DomainSpec::validate() const {
  if (nx < 1 || ny < 1) {
    throw ConfigError("domain: cell counts must be positive (nx=" + std::to_string(nx) +
                      ", ny=" + std::to_string(ny) + ")");
  }
  if (!(extent[0] > 0.0) || !(extent[1] > 0.0) || !std::isfinite(extent[0]) ||
      !std::isfinite(extent[1])) {
    throw ConfigError("domain: extent must be positive and finite");
  }
  const double hx = extent[0] / nx;
  const double hy = extent[1] / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    std::ostringstream msg;
    msg << "domain: cells are not square (hx=" << hx << ", hy=" << hy << ")";
    throw ConfigError(msg.str());
  }
}

const char* to_string(Side side) {
  switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
  }
  return "?";
}

Side side_from_string(const std::string& name) {
  if (name == "left") return Side::left;
  if (name == "right") return Side::right;
  if (name == "bottom") return Side::bottom;
  if (name == "top") return Side::top;
  throw ConfigError("unknown side '" + name + "'");
}

Vec2 BoundaryEdge::outward_normal() const {
  switch (side) {
    case Side::left: return {-1.0, 0.0};
    case Side::right: return {1.0, 0.0};
    case Side::bottom: return {0.0, -1.0};
    case Side::top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

std::vector<std::string> Mesh::tags() const {
  std::vector<std::string> out;
  for (const auto& e : boundary_edges) {
    if (std::find(out.begin(), out.end(), e.tag) == out.end()) out.push_back(e.tag);
  }
  return out;
}

int Mesh::locate(const Vec2& p, std::array<double, 3>& bary) const {
  const double h = domain.h();
  double xi = (p[0] - domain.origin[0]) / h;
  double eta = (p[1] - domain.origin[1]) / h;
  int i = std::clamp(static_cast<int>(std::floor(xi)), 0, domain.nx - 1);
  int j = std::clamp(static_cast<int>(std::floor(eta)), 0, domain.ny - 1);
  xi = std::clamp(xi - i, 0.0, 1.0);
  eta = std::clamp(eta - j, 0.0, 1.0);
  const int cell = j * domain.nx + i;
  if (xi >= eta) {
    // (v00, v10, v11)
    bary = {1.0 - xi, xi - eta, eta};
    return 2 * cell;
  }
  // (v00, v11, v01)
  bary = {1.0 - eta, xi, eta - xi};
  return 2 * cell + 1;
}

namespace {

// Coordinate along a side, measured in absolute units.
double along(const DomainSpec& spec, Side side, double offset_cells) {
  const double h = spec.h();
  return (side == Side::left || side == Side::right) ? spec.origin[1] + offset_cells * h
                                                      : spec.origin[0] + offset_cells * h;
}

int side_cells(const DomainSpec& spec, Side side) {
  return (side == Side::left || side == Side::right) ? spec.ny : spec.nx;
}

bool segment_contains(const DomainSpec& spec, const BoundarySegment& seg, int k) {
  const double mid = along(spec, seg.side, k + 0.5);
  const double lo = seg.center - 0.5 * seg.length;
  const double hi = seg.center + 0.5 * seg.length;
  return mid >= lo && mid <= hi;
}

void validate_segments(const DomainSpec& spec, std::span<const BoundarySegment> segments) {
  for (std::size_t a = 0; a < segments.size(); ++a) {
    const auto& s = segments[a];
    if (s.tag.empty()) throw ConfigError("boundary segment without tag");
    if (!(s.length > 0.0)) throw ConfigError("boundary segment '" + s.tag + "': length must be positive");
    const double start = along(spec, s.side, 0.0);
    const double end = along(spec, s.side, side_cells(spec, s.side));
    const double tol = 1e-12 * (end - start);
    if (s.center - 0.5 * s.length < start - tol || s.center + 0.5 * s.length > end + tol) {
      throw ConfigError("boundary segment '" + s.tag + "' leaves the " + to_string(s.side) + " side");
    }
    for (std::size_t b = 0; b < a; ++b) {
      const auto& o = segments[b];
      if (o.side != s.side) continue;
      const double overlap = std::min(s.center + 0.5 * s.length, o.center + 0.5 * o.length) -
                             std::max(s.center - 0.5 * s.length, o.center - 0.5 * o.length);
      if (overlap > tol) {
        throw ConfigError("boundary segments '" + o.tag + "' and '" + s.tag + "' overlap");
      }
    }
  }
}

}  // namespace

std::pair<double, double> snapped_interval(const DomainSpec& spec, const BoundarySegment& segment) {
  const int n = side_cells(spec, segment.side);
  int first = -1;
  int last = -1;
  for (int k = 0; k < n; ++k) {
    if (segment_contains(spec, segment, k)) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) {
    const double c = segment.center;
    return {c, c};
  }
  return {along(spec, segment.side, first), along(spec, segment.side, last + 1)};
}

Mesh build_mesh(const DomainSpec& spec, std::span<const BoundarySegment> segments) {
  spec.validate();
  if (spec.nx < 2 || spec.ny < 2) {
    throw ConfigError("mesh: need at least 2 cells per axis");
  }
  validate_segments(spec, segments);

  Mesh mesh;
  mesh.domain = spec;
  const int nvx = spec.nodes_x();
  mesh.vertices.reserve(spec.node_count());
  for (int j = 0; j < spec.nodes_y(); ++j) {
    for (int i = 0; i < nvx; ++i) mesh.vertices.push_back(spec.node_position(i, j));
  }

  mesh.triangles.reserve(2 * std::size_t(spec.nx) * spec.ny);
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const int v00 = spec.node(i, j);
      const int v10 = spec.node(i + 1, j);
      const int v01 = spec.node(i, j + 1);
      const int v11 = spec.node(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  std::unordered_map<std::int64_t, int> edge_index;
  edge_index.reserve(3 * mesh.triangles.size());
  auto key = [&](int a, int b) {
    return std::int64_t(std::min(a, b)) * mesh.vertices.size() + std::max(a, b);
  };
  mesh.triangle_edges.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    std::array<int, 3> te{};
    for (int l = 0; l < 3; ++l) {
      const int a = t[l];
      const int b = t[(l + 1) % 3];
      auto [it, inserted] = edge_index.try_emplace(key(a, b), int(mesh.edges.size()));
      if (inserted) mesh.edges.push_back({std::min(a, b), std::max(a, b)});
      te[l] = it->second;
    }
    mesh.triangle_edges.push_back(te);
  }

  auto add_side = [&](Side side) {
    const int n = side_cells(spec, side);
    for (int k = 0; k < n; ++k) {
      BoundaryEdge be;
      be.side = side;
      switch (side) {
        case Side::bottom: be.vertices = {spec.node(k, 0), spec.node(k + 1, 0)}; break;
        case Side::right: be.vertices = {spec.node(spec.nx, k), spec.node(spec.nx, k + 1)}; break;
        case Side::top: be.vertices = {spec.node(k + 1, spec.ny), spec.node(k, spec.ny)}; break;
        case Side::left: be.vertices = {spec.node(0, k + 1), spec.node(0, k)}; break;
      }
      be.edge = edge_index.at(key(be.vertices[0], be.vertices[1]));
      be.tag = kWallTag;
      for (const auto& seg : segments) {
        if (seg.side == side && segment_contains(spec, seg, k)) {
          be.tag = seg.tag;
          break;
        }
      }
      mesh.boundary_edges.push_back(std::move(be));
    }
  };
  add_side(Side::bottom);
  add_side(Side::right);
  add_side(Side::top);
  add_side(Side::left);
  return mesh;
}

int DofMap::dirichlet_count() const {
  return int(std::count(dirichlet_mask.begin(), dirichlet_mask.end(), std::uint8_t{1}));
}

DofMap build_dofmap(const Mesh& mesh, const BoundarySpec& boundary_spec) {
  std::map<std::string, int> condition_of;
  for (std::size_t c = 0; c < boundary_spec.size(); ++c) {
    const auto& tag = boundary_spec[c].first;
    if (!condition_of.emplace(tag, int(c)).second) {
      throw ConfigError("boundary tag '" + tag + "' is covered by more than one condition");
    }
  }
  const auto tags = mesh.tags();
  for (const auto& tag : tags) {
    if (!condition_of.count(tag)) throw ConfigError("boundary tag '" + tag + "' has no condition");
  }
  for (const auto& [tag, c] : condition_of) {
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
      throw ConfigError("boundary condition for '" + tag + "' matches no boundary edge");
    }
  }

  DofMap dm;
  dm.vertex_count = int(mesh.vertices.size());
  dm.edge_count = int(mesh.edges.size());
  dm.p2_nodes = mesh.vertices;
  dm.p2_nodes.reserve(dm.p2_count());
  for (const auto& e : mesh.edges) {
    const auto& a = mesh.vertices[e[0]];
    const auto& b = mesh.vertices[e[1]];
    dm.p2_nodes.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
  }
  dm.element_nodes.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& v = mesh.triangles[t];
    const auto& e = mesh.triangle_edges[t];
    dm.element_nodes.push_back({v[0], v[1], v[2], dm.vertex_count + e[0], dm.vertex_count + e[1],
                                dm.vertex_count + e[2]});
  }

  dm.dirichlet_mask.assign(dm.velocity_dof_count(), 0);
  dm.dirichlet_value.assign(dm.velocity_dof_count(), 0.0);
  // Highest condition index applied last on shared nodes.
  std::vector<int> owner(dm.p2_count(), -1);
  for (std::size_t b = 0; b < mesh.boundary_edges.size(); ++b) {
    const auto& be = mesh.boundary_edges[b];
    const int c = condition_of.at(be.tag);
    const auto& cond = boundary_spec[c].second;
    const std::array<int, 3> nodes{be.vertices[0], be.vertices[1], dm.vertex_count + be.edge};
    if (cond.kind == BoundaryCondition::Kind::neumann) {
      NeumannEdge ne;
      ne.boundary_edge = int(b);
      ne.nodes = nodes;
      ne.normal = be.outward_normal();
      ne.length = mesh.domain.h();
      ne.traction = cond.value;
      dm.neumann_edges.push_back(std::move(ne));
      continue;
    }
    for (int n : nodes) {
      if (owner[n] > c) continue;
      owner[n] = c;
      const Vec2 value = cond.value ? cond.value(dm.p2_nodes[n]) : Vec2{0.0, 0.0};
      for (int comp = 0; comp < 2; ++comp) {
        dm.dirichlet_mask[2 * n + comp] = 1;
        dm.dirichlet_value[2 * n + comp] = value[comp];
      }
    }
  }
  return dm;
}

}  // namespace tdflow
