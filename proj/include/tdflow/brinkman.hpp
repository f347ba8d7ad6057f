#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <string>
#include <vector>

#include "tdflow/conv.hpp"
#include "tdflow/fields.hpp"
#include "tdflow/grid.hpp"

namespace tdflow {

/// Brinkman flow on a fixed mesh:
///   -div(mu grad u) + alpha u + grad p = f,  div u = 0,
/// with Dirichlet velocity data and (mu grad u - p I) n = g on Neumann parts.
struct BrinkmanProblem {
  Mesh mesh;
  DofMap dofmap;
  double mu = 1.0;
  double alpha_bar = 1.0;
  VectorFunction body_force;  // empty means zero

  /// Validated construction; see validate().
  static BrinkmanProblem create(Mesh mesh, DofMap dofmap, double mu, double alpha_bar,
                                VectorFunction body_force = {});

  /// Throws ConfigError unless mu > 0, alpha_bar > 0 and, for all-Dirichlet
  /// boundaries, the discrete boundary flux of the data vanishes to 1e-10.
  void validate() const;

  const DomainSpec& grid() const { return mesh.domain; }
};

/// Net outward flux of the P2 interpolant of the Dirichlet data over all
/// Dirichlet edges (exact Simpson integration of the quadratic trace).
double dirichlet_net_flux(const Mesh& mesh, const DofMap& dofmap);

/// alpha_bar * (G_tau * chi2) on the node lattice.
NodalScalarField build_alpha_field(const IndicatorField& chi, double tau, double alpha_bar,
                                   ConvBoundary boundary = ConvBoundary::periodic);

/// Symmetric saddle-point system [[A, B^T, 0], [B, 0, c], [0, c^T, 0]] over
/// the free velocity dofs, all pressure dofs and, when there is no Neumann
/// boundary, one multiplier enforcing zero mean pressure. Dirichlet values
/// are lifted into the right-hand side.
struct SaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  DomainSpec grid;
  std::vector<int> velocity_row;  // per velocity dof; -1 for Dirichlet dofs
  std::vector<double> dirichlet_value;
  int free_velocity = 0;
  int pressure = 0;
  bool mean_pressure_constraint = false;
  /// Position of each unknown in half-cell units (twice the lattice
  /// coordinates); {-1, -1} for the multiplier. Used for the fill-reducing
  /// ordering.
  std::vector<std::array<int, 2>> lattice_position;

  int size() const { return int(rhs.size()); }
};

struct FlowSolution {
  DomainSpec grid;
  std::vector<double> velocity;  // 2 per P2 node, interleaved (ux, uy)
  std::vector<double> pressure;  // per vertex
  double residual_norm = 0.0;
  double mean_pressure_multiplier = 0.0;

  Vec2 node_velocity(int p2_node) const { return {velocity[2 * p2_node], velocity[2 * p2_node + 1]}; }
};

/// Assembles Brinkman systems for one problem, caching everything that does
/// not depend on the permeability field (pattern, viscous and divergence
/// blocks, lifted load).
class BrinkmanAssembler {
 public:
  explicit BrinkmanAssembler(const BrinkmanProblem& problem);
  ~BrinkmanAssembler();
  BrinkmanAssembler(BrinkmanAssembler&&) noexcept;
  BrinkmanAssembler& operator=(BrinkmanAssembler&&) noexcept;

  /// Throws ArgumentError on a grid mismatch or when alpha falls below
  /// -1e-3 * max|alpha| (small negative lobes of the spectral kernel pass).
  SaddleSystem assemble(const NodalScalarField& alpha) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Sparse direct solver for saddle systems. Pins one pressure value when
/// the system carries the mean-pressure multiplier, orders the unknowns by
/// nested dissection of the grid, factors the slightly regularized
/// (quasi-definite) matrix as L D L^T and removes the regularization by
/// iterative refinement. The ordering and symbolic factorization are reused
/// while successive systems share a sparsity pattern.
class SaddleSolver {
 public:
  SaddleSolver();
  ~SaddleSolver();
  SaddleSolver(SaddleSolver&&) noexcept;
  SaddleSolver& operator=(SaddleSolver&&) noexcept;

  /// Throws SolverError (with the reciprocal condition estimate) when the
  /// factorization fails or the residual of the full system exceeds
  /// 1e-10 * |rhs|.
  FlowSolution solve(const SaddleSystem& system);

  /// Crude reciprocal condition estimate of the last factorization,
  /// min |D| / max |D| over the pivots.
  double last_rcond() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SaddleSystem assemble(const BrinkmanProblem& problem, const NodalScalarField& alpha_field);
FlowSolution solve(const SaddleSystem& system);

/// Integral of (mu / 2) |grad u_h|^2.
double dissipation(const FlowSolution& solution, const BrinkmanProblem& problem);

/// (1/2) (alpha u_h, u_h) with the quadrature and bilinear alpha
/// interpolation used by the assembly.
double penalty_energy(const FlowSolution& solution, const BrinkmanProblem& problem,
                      const NodalScalarField& alpha_field);

/// (f, u_h) + (g, u_h) on Neumann edges.
double load_work(const FlowSolution& solution, const BrinkmanProblem& problem);

/// |u_h|^2 sampled at the grid vertices.
NodalScalarField speed_squared_nodal(const FlowSolution& solution);

/// Lattice density of |u_h|^2: node n carries (1/h^2) * integral of |u_h|^2
/// against the bilinear hat of n, evaluated with the assembly quadrature.
/// For any nodal field a, h^2 * sum_n a_n s_n equals the assembled
/// integral of I(a) |u_h|^2 exactly (I = bilinear interpolation).
NodalScalarField speed_squared_density(const FlowSolution& solution, const BrinkmanProblem& problem);

Vec2 velocity_at(const FlowSolution& solution, const BrinkmanProblem& problem, const Vec2& point);

/// Outward flux of u_h through the boundary edges carrying `tag`; throws
/// ArgumentError if no edge carries it.
double boundary_flux(const FlowSolution& solution, const BrinkmanProblem& problem,
                     const std::string& tag);

/// (div u_h, q_i) for every P1 pressure basis function q_i.
std::vector<double> divergence_moments(const FlowSolution& solution, const BrinkmanProblem& problem);

struct ErrorNorms {
  double velocity_l2 = 0.0;
  double velocity_h1 = 0.0;  // seminorm
  double pressure_l2 = 0.0;  // after removing the mean of both pressures
};

struct ReferenceFlow {
  VectorFunction velocity;
  std::function<std::array<double, 4>(const Vec2&)> gradient;  // du1/dx, du1/dy, du2/dx, du2/dy
  std::function<double(const Vec2&)> pressure;
};

/// Errors against a smooth reference, integrated with a degree-10 rule.
ErrorNorms error_norms(const FlowSolution& solution, const BrinkmanProblem& problem,
                       const ReferenceFlow& reference);

}  // namespace tdflow
