#include "tdflow/brinkman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "p2_element.hpp"
#include "tdflow/error.hpp"

namespace tdflow {

using detail::TriangleGeometry;
using detail::degree4_rule;
using detail::p2_values;

namespace {

struct ElementView {
  const std::array<int, 3>& verts;
  const std::array<int, 6>& nodes;
  TriangleGeometry geom;
  const Vec2& a;
  const Vec2& b;
  const Vec2& c;

  ElementView(const BrinkmanProblem& pb, std::size_t e)
      : verts(pb.mesh.triangles[e]),
        nodes(pb.dofmap.element_nodes[e]),
        geom(pb.mesh.vertices[verts[0]], pb.mesh.vertices[verts[1]], pb.mesh.vertices[verts[2]]),
        a(pb.mesh.vertices[verts[0]]),
        b(pb.mesh.vertices[verts[1]]),
        c(pb.mesh.vertices[verts[2]]) {}

  Vec2 point(const std::array<double, 3>& l) const { return geom.point(a, b, c, l); }
};

// Bilinear weights of the four corners of the cell owning element e.
std::array<double, 4> element_bilinear(const DomainSpec& grid, std::size_t e, const Vec2& p,
                                       std::array<int, 4>& corner) {
  const int cell = int(e / 2);
  const int i = cell % grid.nx;
  const int j = cell / grid.nx;
  const double h = grid.h();
  const double xi = (p[0] - (grid.origin[0] + i * h)) / h;
  const double eta = (p[1] - (grid.origin[1] + j * h)) / h;
  corner = {grid.node(i, j), grid.node(i + 1, j), grid.node(i, j + 1), grid.node(i + 1, j + 1)};
  return {(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta};
}

double interpolate(const NodalScalarField& f, const DomainSpec& grid, std::size_t e, const Vec2& p) {
  std::array<int, 4> corner{};
  const auto w = element_bilinear(grid, e, p, corner);
  return w[0] * f[corner[0]] + w[1] * f[corner[1]] + w[2] * f[corner[2]] + w[3] * f[corner[3]];
}

Vec2 element_velocity(const FlowSolution& s, const std::array<int, 6>& nodes, const std::array<double, 6>& phi) {
  Vec2 u{0.0, 0.0};
  for (int k = 0; k < 6; ++k) {
    u[0] += phi[k] * s.velocity[2 * nodes[k]];
    u[1] += phi[k] * s.velocity[2 * nodes[k] + 1];
  }
  return u;
}

std::array<double, 4> element_gradient(const FlowSolution& s, const std::array<int, 6>& nodes,
                                       const std::array<Vec2, 6>& grad) {
  std::array<double, 4> g{};
  for (int k = 0; k < 6; ++k) {
    const double ux = s.velocity[2 * nodes[k]];
    const double uy = s.velocity[2 * nodes[k] + 1];
    g[0] += ux * grad[k][0];
    g[1] += ux * grad[k][1];
    g[2] += uy * grad[k][0];
    g[3] += uy * grad[k][1];
  }
  return g;
}

// Three-point Gauss rule on [0, 1].
constexpr std::array<double, 3> kEdgeNodes{0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> kEdgeWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// 1D P2 basis on an edge: endpoints, then midpoint.
std::array<double, 3> edge_p2(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
}

void check_solution_layout(const FlowSolution& s, const BrinkmanProblem& pb) {
  if (!(s.grid == pb.grid()) || int(s.velocity.size()) != pb.dofmap.velocity_dof_count() ||
      int(s.pressure.size()) != pb.dofmap.pressure_dof_count()) {
    throw ArgumentError("flow solution does not belong to this problem");
  }
}

}  // namespace

BrinkmanProblem BrinkmanProblem::create(Mesh mesh, DofMap dofmap, double mu, double alpha_bar,
                                        VectorFunction body_force) {
  BrinkmanProblem pb{std::move(mesh), std::move(dofmap), mu, alpha_bar, std::move(body_force)};
  pb.validate();
  return pb;
}

void BrinkmanProblem::validate() const {
  if (!(mu > 0.0)) throw ConfigError("brinkman: mu must be positive");
  if (!(alpha_bar > 0.0)) throw ConfigError("brinkman: alpha_bar must be positive");
  if (dofmap.vertex_count != int(mesh.vertices.size()) || dofmap.element_nodes.size() != mesh.triangles.size()) {
    throw ConfigError("brinkman: dof map does not match mesh");
  }
  if (!dofmap.has_neumann()) {
    const double flux = dirichlet_net_flux(mesh, dofmap);
    if (std::abs(flux) > 1e-10) {
      std::ostringstream msg;
      msg << "brinkman: all-Dirichlet data has net boundary flux " << flux;
      throw ConfigError(msg.str());
    }
  }
}

double dirichlet_net_flux(const Mesh& mesh, const DofMap& dm) {
  double flux = 0.0;
  for (const auto& be : mesh.boundary_edges) {
    const int mid = dm.vertex_count + be.edge;
    const std::array<int, 3> nodes{be.vertices[0], be.vertices[1], mid};
    if (!dm.dirichlet_mask[2 * mid]) continue;
    const Vec2 n = be.outward_normal();
    double w[3] = {1.0 / 6.0, 1.0 / 6.0, 4.0 / 6.0};
    for (int k = 0; k < 3; ++k) {
      const double un = dm.dirichlet_value[2 * nodes[k]] * n[0] + dm.dirichlet_value[2 * nodes[k] + 1] * n[1];
      flux += w[k] * mesh.domain.h() * un;
    }
  }
  return flux;
}

NodalScalarField build_alpha_field(const IndicatorField& chi, double tau, double alpha_bar, ConvBoundary boundary) {
  if (!(tau > 0.0)) throw ArgumentError("build_alpha_field: tau must be positive");
  if (!(alpha_bar > 0.0)) throw ArgumentError("build_alpha_field: alpha_bar must be positive");
  NodalScalarField alpha = gaussian_convolve(chi.solid(), tau, boundary);
  for (double& v : alpha.values()) v *= alpha_bar;
  return alpha;
}

// ---------------------------------------------------------------------------
// Assembly

struct BrinkmanAssembler::Impl {
  const BrinkmanProblem* problem = nullptr;
  Eigen::SparseMatrix<double> base;
  Eigen::VectorXd base_rhs;
  std::vector<int> velocity_row;
  std::vector<std::array<int, 2>> lattice_position;
  int free_velocity = 0;
  int pressure = 0;
  bool mean_constraint = false;
  // Per element: value index of the (a, b, component) velocity entry, -1 if
  // either dof is Dirichlet.
  std::vector<std::array<int, 72>> scatter;
};

BrinkmanAssembler::BrinkmanAssembler(const BrinkmanProblem& pb) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.problem = &pb;
  const DofMap& dm = pb.dofmap;
  s.velocity_row.assign(dm.velocity_dof_count(), -1);
  for (int d = 0; d < dm.velocity_dof_count(); ++d) {
    if (!dm.dirichlet_mask[d]) s.velocity_row[d] = s.free_velocity++;
  }
  s.pressure = dm.pressure_dof_count();
  s.mean_constraint = !dm.has_neumann();
  const int n = s.free_velocity + s.pressure + (s.mean_constraint ? 1 : 0);
  const int lagrange = n - 1;
  s.base_rhs = Eigen::VectorXd::Zero(n);

  const DomainSpec& g = pb.grid();
  auto half_cells = [&](const Vec2& x) {
    return std::array<int, 2>{int(std::lround(2.0 * (x[0] - g.origin[0]) / g.h())),
                              int(std::lround(2.0 * (x[1] - g.origin[1]) / g.h()))};
  };
  s.lattice_position.assign(n, {-1, -1});
  for (int d = 0; d < dm.velocity_dof_count(); ++d) {
    if (s.velocity_row[d] >= 0) s.lattice_position[s.velocity_row[d]] = half_cells(dm.p2_nodes[d / 2]);
  }
  for (int v = 0; v < s.pressure; ++v) s.lattice_position[s.free_velocity + v] = half_cells(dm.p2_nodes[v]);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(pb.mesh.triangles.size() * (72 + 72) + 6 * pb.mesh.triangles.size());
  const auto& rule = degree4_rule();
  const auto& uD = dm.dirichlet_value;

  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    double K[6][6] = {};
    double B[3][6][2] = {};
    double F[6][2] = {};
    for (const auto& q : rule) {
      const double w = q.weight * el.geom.area;
      const auto phi = p2_values(q.bary);
      const auto grad = el.geom.p2_gradients(q.bary);
      Vec2 f{0.0, 0.0};
      if (pb.body_force) f = pb.body_force(el.point(q.bary));
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) K[a][b] += pb.mu * w * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
        F[a][0] += w * f[0] * phi[a];
        F[a][1] += w * f[1] * phi[a];
      }
      for (int p = 0; p < 3; ++p) {
        for (int b = 0; b < 6; ++b) {
          B[p][b][0] -= w * q.bary[p] * grad[b][0];
          B[p][b][1] -= w * q.bary[p] * grad[b][1];
        }
      }
    }
    for (int c = 0; c < 2; ++c) {
      for (int a = 0; a < 6; ++a) {
        const int ra = s.velocity_row[2 * el.nodes[a] + c];
        if (ra < 0) continue;
        s.base_rhs[ra] += F[a][c];
        for (int b = 0; b < 6; ++b) {
          const int dof_b = 2 * el.nodes[b] + c;
          const int rb = s.velocity_row[dof_b];
          if (rb >= 0) {
            trip.emplace_back(ra, rb, K[a][b]);
          } else {
            s.base_rhs[ra] -= K[a][b] * uD[dof_b];
          }
        }
      }
    }
    for (int p = 0; p < 3; ++p) {
      const int pr = s.free_velocity + el.verts[p];
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 2; ++c) {
          const int dof_b = 2 * el.nodes[b] + c;
          const int rb = s.velocity_row[dof_b];
          if (rb >= 0) {
            trip.emplace_back(pr, rb, B[p][b][c]);
            trip.emplace_back(rb, pr, B[p][b][c]);
          } else {
            s.base_rhs[pr] -= B[p][b][c] * uD[dof_b];
          }
        }
      }
      if (s.mean_constraint) {
        trip.emplace_back(lagrange, pr, el.geom.area / 3.0);
        trip.emplace_back(pr, lagrange, el.geom.area / 3.0);
      }
    }
  }

  for (const auto& ne : dm.neumann_edges) {
    if (!ne.traction) continue;
    const Vec2& p0 = dm.p2_nodes[ne.nodes[0]];
    const Vec2& p1 = dm.p2_nodes[ne.nodes[1]];
    for (int g = 0; g < 3; ++g) {
      const double t = kEdgeNodes[g];
      const Vec2 x{p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])};
      const Vec2 traction = ne.traction(x);
      const auto phi = edge_p2(t);
      for (int k = 0; k < 3; ++k) {
        for (int c = 0; c < 2; ++c) {
          const int r = s.velocity_row[2 * ne.nodes[k] + c];
          if (r >= 0) s.base_rhs[r] += kEdgeWeights[g] * ne.length * traction[c] * phi[k];
        }
      }
    }
  }

  s.base.resize(n, n);
  s.base.setFromTriplets(trip.begin(), trip.end());
  s.base.makeCompressed();
  trip.clear();
  trip.shrink_to_fit();

  const int* outer = s.base.outerIndexPtr();
  const int* inner = s.base.innerIndexPtr();
  auto position = [&](int row, int col) {
    const int* lo = inner + outer[col];
    const int* hi = inner + outer[col + 1];
    const int* it = std::lower_bound(lo, hi, row);
    if (it == hi || *it != row) throw std::logic_error("brinkman: missing pattern entry");
    return int(it - inner);
  };
  s.scatter.resize(pb.mesh.triangles.size());
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    const auto& nodes = dm.element_nodes[e];
    auto& sc = s.scatter[e];
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 2; ++c) {
          const int ra = s.velocity_row[2 * nodes[a] + c];
          const int rb = s.velocity_row[2 * nodes[b] + c];
          sc[(a * 6 + b) * 2 + c] = (ra >= 0 && rb >= 0) ? position(ra, rb) : -1;
        }
      }
    }
  }
}

BrinkmanAssembler::~BrinkmanAssembler() = default;
BrinkmanAssembler::BrinkmanAssembler(BrinkmanAssembler&&) noexcept = default;
BrinkmanAssembler& BrinkmanAssembler::operator=(BrinkmanAssembler&&) noexcept = default;

SaddleSystem BrinkmanAssembler::assemble(const NodalScalarField& alpha) const {
  const Impl& s = *impl_;
  const BrinkmanProblem& pb = *s.problem;
  const DomainSpec& grid = pb.grid();
  if (!(alpha.grid() == grid)) throw ArgumentError("assemble: alpha field is on a different grid");
  double amax = 0.0;
  double amin = 0.0;
  for (double v : alpha.values()) {
    if (!std::isfinite(v)) throw ArgumentError("assemble: non-finite alpha");
    amax = std::max(amax, std::abs(v));
    amin = std::min(amin, v);
  }
  if (amin < -1e-3 * amax) {
    std::ostringstream msg;
    msg << "assemble: alpha has negative values (min " << amin << ")";
    throw ArgumentError(msg.str());
  }

  SaddleSystem sys;
  sys.matrix = s.base;
  sys.rhs = s.base_rhs;
  sys.grid = grid;
  sys.velocity_row = s.velocity_row;
  sys.dirichlet_value = pb.dofmap.dirichlet_value;
  sys.free_velocity = s.free_velocity;
  sys.pressure = s.pressure;
  sys.mean_pressure_constraint = s.mean_constraint;
  sys.lattice_position = s.lattice_position;

  double* values = sys.matrix.valuePtr();
  const auto& rule = degree4_rule();
  const auto& uD = pb.dofmap.dirichlet_value;
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    double M[6][6] = {};
    for (const auto& q : rule) {
      const double a = interpolate(alpha, grid, e, el.point(q.bary));
      if (a == 0.0) continue;
      const double w = q.weight * el.geom.area * a;
      const auto phi = p2_values(q.bary);
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) M[i][j] += w * phi[i] * phi[j];
      }
    }
    const auto& sc = s.scatter[e];
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        for (int c = 0; c < 2; ++c) {
          const int pos = sc[(i * 6 + j) * 2 + c];
          if (pos >= 0) {
            values[pos] += M[i][j];
            continue;
          }
          const int ri = s.velocity_row[2 * el.nodes[i] + c];
          const int dof_j = 2 * el.nodes[j] + c;
          if (ri >= 0 && s.velocity_row[dof_j] < 0) sys.rhs[ri] -= M[i][j] * uD[dof_j];
        }
      }
    }
  }
  return sys;
}

SaddleSystem assemble(const BrinkmanProblem& problem, const NodalScalarField& alpha_field) {
  return BrinkmanAssembler(problem).assemble(alpha_field);
}

FlowSolution solve(const SaddleSystem& system) {
  SaddleSolver solver;
  return solver.solve(system);
}

// ---------------------------------------------------------------------------
// Post-processing

double dissipation(const FlowSolution& sol, const BrinkmanProblem& pb) {
  check_solution_layout(sol, pb);
  double total = 0.0;
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : degree4_rule()) {
      const auto g = element_gradient(sol, el.nodes, el.geom.p2_gradients(q.bary));
      total += q.weight * el.geom.area * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
    }
  }
  return 0.5 * pb.mu * total;
}

double penalty_energy(const FlowSolution& sol, const BrinkmanProblem& pb, const NodalScalarField& alpha) {
  check_solution_layout(sol, pb);
  if (!(alpha.grid() == pb.grid())) throw ArgumentError("penalty_energy: grid mismatch");
  double total = 0.0;
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : degree4_rule()) {
      const Vec2 x = el.point(q.bary);
      const Vec2 u = element_velocity(sol, el.nodes, p2_values(q.bary));
      total += q.weight * el.geom.area * interpolate(alpha, pb.grid(), e, x) * (u[0] * u[0] + u[1] * u[1]);
    }
  }
  return 0.5 * total;
}

double load_work(const FlowSolution& sol, const BrinkmanProblem& pb) {
  check_solution_layout(sol, pb);
  double total = 0.0;
  if (pb.body_force) {
    for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
      ElementView el(pb, e);
      for (const auto& q : degree4_rule()) {
        const Vec2 f = pb.body_force(el.point(q.bary));
        const Vec2 u = element_velocity(sol, el.nodes, p2_values(q.bary));
        total += q.weight * el.geom.area * (f[0] * u[0] + f[1] * u[1]);
      }
    }
  }
  for (const auto& ne : pb.dofmap.neumann_edges) {
    if (!ne.traction) continue;
    const Vec2& p0 = pb.dofmap.p2_nodes[ne.nodes[0]];
    const Vec2& p1 = pb.dofmap.p2_nodes[ne.nodes[1]];
    for (int g = 0; g < 3; ++g) {
      const double t = kEdgeNodes[g];
      const Vec2 x{p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])};
      const Vec2 traction = ne.traction(x);
      const auto phi = edge_p2(t);
      Vec2 u{0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        u[0] += phi[k] * sol.velocity[2 * ne.nodes[k]];
        u[1] += phi[k] * sol.velocity[2 * ne.nodes[k] + 1];
      }
      total += kEdgeWeights[g] * ne.length * (traction[0] * u[0] + traction[1] * u[1]);
    }
  }
  return total;
}

NodalScalarField speed_squared_nodal(const FlowSolution& sol) {
  NodalScalarField out(sol.grid);
  if (sol.velocity.size() < 2 * out.size()) throw ArgumentError("speed_squared_nodal: malformed solution");
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double ux = sol.velocity[2 * n];
    const double uy = sol.velocity[2 * n + 1];
    out[n] = ux * ux + uy * uy;
  }
  return out;
}

NodalScalarField speed_squared_density(const FlowSolution& sol, const BrinkmanProblem& pb) {
  check_solution_layout(sol, pb);
  NodalScalarField out(pb.grid());
  const double inv_h2 = 1.0 / (pb.grid().h() * pb.grid().h());
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : degree4_rule()) {
      const Vec2 x = el.point(q.bary);
      const Vec2 u = element_velocity(sol, el.nodes, p2_values(q.bary));
      const double m = q.weight * el.geom.area * (u[0] * u[0] + u[1] * u[1]) * inv_h2;
      std::array<int, 4> corner{};
      const auto w = element_bilinear(pb.grid(), e, x, corner);
      for (int k = 0; k < 4; ++k) out[corner[k]] += w[k] * m;
    }
  }
  return out;
}

Vec2 velocity_at(const FlowSolution& sol, const BrinkmanProblem& pb, const Vec2& point) {
  check_solution_layout(sol, pb);
  std::array<double, 3> bary{};
  const int t = pb.mesh.locate(point, bary);
  return element_velocity(sol, pb.dofmap.element_nodes[t], p2_values(bary));
}

double boundary_flux(const FlowSolution& sol, const BrinkmanProblem& pb, const std::string& tag) {
  check_solution_layout(sol, pb);
  double flux = 0.0;
  bool found = false;
  for (const auto& be : pb.mesh.boundary_edges) {
    if (be.tag != tag) continue;
    found = true;
    const Vec2 n = be.outward_normal();
    const std::array<int, 3> nodes{be.vertices[0], be.vertices[1], pb.dofmap.vertex_count + be.edge};
    const double w[3] = {1.0 / 6.0, 1.0 / 6.0, 4.0 / 6.0};
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = sol.node_velocity(nodes[k]);
      flux += w[k] * pb.grid().h() * (u[0] * n[0] + u[1] * n[1]);
    }
  }
  if (!found) throw ArgumentError("boundary_flux: no boundary edge carries tag '" + tag + "'");
  return flux;
}

std::vector<double> divergence_moments(const FlowSolution& sol, const BrinkmanProblem& pb) {
  check_solution_layout(sol, pb);
  std::vector<double> out(pb.dofmap.pressure_dof_count(), 0.0);
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : degree4_rule()) {
      const auto g = element_gradient(sol, el.nodes, el.geom.p2_gradients(q.bary));
      const double div = g[0] + g[3];
      for (int p = 0; p < 3; ++p) out[el.verts[p]] += q.weight * el.geom.area * q.bary[p] * div;
    }
  }
  return out;
}

ErrorNorms error_norms(const FlowSolution& sol, const BrinkmanProblem& pb, const ReferenceFlow& ref) {
  check_solution_layout(sol, pb);
  const auto rule = detail::collapsed_gauss_rule(6);
  double area = 0.0, mean_h = 0.0, mean_ref = 0.0;
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : rule) {
      const double w = q.weight * el.geom.area;
      const Vec2 x = el.point(q.bary);
      const Vec2 u = element_velocity(sol, el.nodes, p2_values(q.bary));
      const auto g = element_gradient(sol, el.nodes, el.geom.p2_gradients(q.bary));
      const Vec2 ue = ref.velocity(x);
      const auto ge = ref.gradient(x);
      l2 += w * ((u[0] - ue[0]) * (u[0] - ue[0]) + (u[1] - ue[1]) * (u[1] - ue[1]));
      for (int k = 0; k < 4; ++k) h1 += w * (g[k] - ge[k]) * (g[k] - ge[k]);
      const double ph = q.bary[0] * sol.pressure[el.verts[0]] + q.bary[1] * sol.pressure[el.verts[1]] +
                        q.bary[2] * sol.pressure[el.verts[2]];
      mean_h += w * ph;
      mean_ref += w * ref.pressure(x);
      area += w;
    }
  }
  mean_h /= area;
  mean_ref /= area;
  double pl2 = 0.0;
  for (std::size_t e = 0; e < pb.mesh.triangles.size(); ++e) {
    ElementView el(pb, e);
    for (const auto& q : rule) {
      const double w = q.weight * el.geom.area;
      const double ph = q.bary[0] * sol.pressure[el.verts[0]] + q.bary[1] * sol.pressure[el.verts[1]] +
                        q.bary[2] * sol.pressure[el.verts[2]] - mean_h;
      const double pe = ref.pressure(el.point(q.bary)) - mean_ref;
      pl2 += w * (ph - pe) * (ph - pe);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(pl2)};
}

}  // namespace tdflow
