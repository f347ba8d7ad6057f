#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "tdflow/brinkman.hpp"
#include "tdflow/error.hpp"

namespace tdflow {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Position = std::array<int, 2>;

constexpr std::size_t kLeafSize = 48;

// Orders rows by nested dissection of the half-cell box [x0, x1] x [y0, y1].
// Separators are vertex lines (even coordinates); no element couples
// unknowns on opposite sides of such a line.
void dissect(std::vector<int>& rows, int x0, int x1, int y0, int y1, const std::vector<Position>& pos,
             std::vector<int>& out) {
  if (rows.size() <= kLeafSize) {
    out.insert(out.end(), rows.begin(), rows.end());
    return;
  }
  auto split_point = [](int lo, int hi) {
    int s = (lo + hi) / 2;
    if (s % 2 != 0) ++s;
    if (!(lo < s && s < hi)) s -= 2;
    return (lo < s && s < hi) ? s : -1;
  };
  int axis = (x1 - x0) >= (y1 - y0) ? 0 : 1;
  int s = axis == 0 ? split_point(x0, x1) : split_point(y0, y1);
  if (s < 0) {
    axis = 1 - axis;
    s = axis == 0 ? split_point(x0, x1) : split_point(y0, y1);
  }
  if (s < 0) {
    out.insert(out.end(), rows.begin(), rows.end());
    return;
  }
  std::vector<int> low, high, sep;
  for (int r : rows) {
    const int c = pos[r][axis];
    (c < s ? low : c > s ? high : sep).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();
  if (axis == 0) {
    dissect(low, x0, s - 1, y0, y1, pos, out);
    dissect(high, s + 1, x1, y0, y1, pos, out);
  } else {
    dissect(low, x0, x1, y0, s - 1, pos, out);
    dissect(high, x0, x1, s + 1, y1, pos, out);
  }
  out.insert(out.end(), sep.begin(), sep.end());
}

int find_entry(const SparseMatrix& m, int row, int col) {
  const int* inner = m.innerIndexPtr();
  const int* lo = inner + m.outerIndexPtr()[col];
  const int* hi = inner + m.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(lo, hi, row);
  if (it == hi || *it != row) throw std::logic_error("saddle solver: missing pattern entry");
  return int(it - inner);
}

}  // namespace

struct SaddleSolver::Impl {
  // pattern of the last analyzed system
  std::vector<int> outer;
  std::vector<int> inner;
  bool multiplier = false;
  int free_velocity = 0;

  int pin = -1;                 // pinned pressure unknown (full numbering)
  std::vector<int> reduced_of;  // full -> reduced index, -1 for the multiplier
  std::vector<int> value_map;   // original nonzero -> reduced value slot, -1 if dropped
  std::vector<int> regularized;  // reduced value slots of pressure diagonals
  int pin_slot = -1;
  SparseMatrix reduced;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> ldl;
  double epsilon = 0.0;
  double rcond = 0.0;

  bool same_pattern(const SaddleSystem& sys, const SparseMatrix& a) const {
    if (outer.empty() || std::size_t(a.outerSize() + 1) != outer.size()) return false;
    if (sys.mean_pressure_constraint != multiplier || sys.free_velocity != free_velocity) return false;
    if (std::size_t(a.nonZeros()) != inner.size()) return false;
    if (std::memcmp(outer.data(), a.outerIndexPtr(), sizeof(int) * outer.size()) != 0) return false;
    return std::memcmp(inner.data(), a.innerIndexPtr(), sizeof(int) * inner.size()) == 0;
  }

  void analyze(const SaddleSystem& sys, const SparseMatrix& a) {
    const int n_full = int(a.rows());
    multiplier = sys.mean_pressure_constraint;
    free_velocity = sys.free_velocity;
    outer.assign(a.outerIndexPtr(), a.outerIndexPtr() + n_full + 1);
    inner.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());

    const int lagrange = multiplier ? n_full - 1 : -1;
    pin = multiplier ? sys.free_velocity : -1;
    if (sys.lattice_position.size() != std::size_t(n_full)) {
      throw ArgumentError("solve: saddle system lacks unknown positions");
    }

    std::vector<int> rows;
    rows.reserve(n_full);
    int x1 = 0;
    int y1 = 0;
    for (int r = 0; r < n_full; ++r) {
      if (r == lagrange || r == pin) continue;
      rows.push_back(r);
      x1 = std::max(x1, sys.lattice_position[r][0]);
      y1 = std::max(y1, sys.lattice_position[r][1]);
    }
    std::vector<int> order;
    order.reserve(n_full);
    if (pin >= 0) order.push_back(pin);
    dissect(rows, 0, x1, 0, y1, sys.lattice_position, order);

    const int n = int(order.size());
    reduced_of.assign(n_full, -1);
    for (int k = 0; k < n; ++k) reduced_of[order[k]] = k;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(a.nonZeros() + n);
    for (int c = 0; c < n_full; ++c) {
      if (c == lagrange || c == pin) continue;
      for (int k = outer[c]; k < outer[c + 1]; ++k) {
        const int r = inner[k];
        if (r == lagrange || r == pin) continue;
        trip.emplace_back(reduced_of[r], reduced_of[c], 0.0);
      }
    }
    for (int r = sys.free_velocity; r < sys.free_velocity + sys.pressure; ++r) {
      trip.emplace_back(reduced_of[r], reduced_of[r], 0.0);
    }
    reduced.resize(n, n);
    reduced.setFromTriplets(trip.begin(), trip.end());
    reduced.makeCompressed();

    value_map.assign(a.nonZeros(), -1);
    for (int c = 0; c < n_full; ++c) {
      if (c == lagrange || c == pin) continue;
      for (int k = outer[c]; k < outer[c + 1]; ++k) {
        const int r = inner[k];
        if (r == lagrange || r == pin) continue;
        value_map[k] = find_entry(reduced, reduced_of[r], reduced_of[c]);
      }
    }
    regularized.clear();
    pin_slot = -1;
    for (int r = sys.free_velocity; r < sys.free_velocity + sys.pressure; ++r) {
      const int slot = find_entry(reduced, reduced_of[r], reduced_of[r]);
      if (r == pin) {
        pin_slot = slot;
      } else {
        regularized.push_back(slot);
      }
    }
    ldl.analyzePattern(reduced);
  }
};

SaddleSolver::SaddleSolver() : impl_(std::make_unique<Impl>()) {}
SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

double SaddleSolver::last_rcond() const { return impl_->rcond; }

FlowSolution SaddleSolver::solve(const SaddleSystem& system) {
  Impl& s = *impl_;
  SparseMatrix a = system.matrix;
  a.makeCompressed();
  const int n_full = int(a.rows());
  if (a.cols() != n_full || system.rhs.size() != n_full ||
      n_full != system.free_velocity + system.pressure + (system.mean_pressure_constraint ? 1 : 0)) {
    throw ArgumentError("solve: malformed saddle system");
  }

  if (!s.same_pattern(system, a)) s.analyze(system, a);

  double* values = s.reduced.valuePtr();
  std::fill(values, values + s.reduced.nonZeros(), 0.0);
  const double* av = a.valuePtr();
  double scale = 0.0;
  for (int k = 0; k < int(s.value_map.size()); ++k) {
    if (s.value_map[k] < 0) continue;
    values[s.value_map[k]] += av[k];
  }
  for (int r = 0; r < system.free_velocity; ++r) {
    scale = std::max(scale, std::abs(s.reduced.coeff(s.reduced_of[r], s.reduced_of[r])));
  }
  if (!(scale > 0.0)) scale = 1.0;
  s.epsilon = 1e-13 * scale;
  for (int slot : s.regularized) values[slot] -= s.epsilon;
  if (s.pin_slot >= 0) values[s.pin_slot] = scale;

  s.ldl.factorize(s.reduced);
  if (s.ldl.info() != Eigen::Success) {
    s.rcond = 0.0;
    throw SolverError("solve: factorization failed (zero pivot)", 0.0);
  }
  const Eigen::VectorXd d = s.ldl.vectorD().cwiseAbs();
  s.rcond = d.maxCoeff() > 0.0 ? d.minCoeff() / d.maxCoeff() : 0.0;
  if (!(s.rcond > 0.0) || !std::isfinite(s.rcond)) {
    throw SolverError("solve: factorization is singular", s.rcond);
  }

  const int n = int(s.reduced.rows());
  Eigen::VectorXd b(n);
  for (int r = 0; r < n_full; ++r) {
    if (s.reduced_of[r] >= 0) b[s.reduced_of[r]] = system.rhs[r];
  }
  if (s.pin >= 0) b[s.reduced_of[s.pin]] = 0.0;

  // undo the regularization: the operator used for residuals is the
  // factored matrix plus epsilon on the pressure diagonal
  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = s.reduced * x;
    for (int r = system.free_velocity; r < system.free_velocity + system.pressure; ++r) {
      if (r != s.pin) y[s.reduced_of[r]] += s.epsilon * x[s.reduced_of[r]];
    }
    return y;
  };
  const double bnorm = b.norm();
  Eigen::VectorXd x = s.ldl.solve(b);
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 30; ++it) {
    const Eigen::VectorXd res = b - apply(x);
    const double rn = res.norm();
    if (!std::isfinite(rn)) break;
    if (rn <= 1e-14 * bnorm || rn > 0.5 * last) break;
    last = rn;
    x += s.ldl.solve(res);
  }

  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_full);
  for (int r = 0; r < n_full; ++r) {
    if (s.reduced_of[r] >= 0) full[r] = x[s.reduced_of[r]];
  }
  if (system.mean_pressure_constraint) {
    const int lagrange = n_full - 1;
    // shift the pressure to zero mean, then take the multiplier that best
    // absorbs the (round-off) compatibility defect of the data
    double mean = 0.0;
    double weight = 0.0;
    for (SparseMatrix::InnerIterator it(a, lagrange); it; ++it) {
      if (it.row() == lagrange) continue;
      mean += it.value() * full[it.row()];
      weight += it.value();
    }
    if (!(weight != 0.0)) throw SolverError("solve: mean-pressure constraint has no weight", s.rcond);
    mean /= weight;
    for (int r = system.free_velocity; r < system.free_velocity + system.pressure; ++r) full[r] -= mean;
    full[lagrange] = 0.0;
    const Eigen::VectorXd r0 = a * full - system.rhs;
    double cr = 0.0;
    double cc = 0.0;
    for (SparseMatrix::InnerIterator it(a, lagrange); it; ++it) {
      if (it.row() == lagrange) continue;
      cr += it.value() * r0[it.row()];
      cc += it.value() * it.value();
    }
    full[lagrange] = -cr / cc;
  }

  const double residual = (a * full - system.rhs).norm();
  const double rhs_norm = system.rhs.norm();
  if (!(residual <= 1e-10 * rhs_norm) && !(rhs_norm == 0.0 && residual == 0.0)) {
    std::ostringstream msg;
    msg << "solve: residual " << residual << " exceeds 1e-10 * |rhs| = " << 1e-10 * rhs_norm << " (rcond "
        << s.rcond << ")";
    throw SolverError(msg.str(), s.rcond);
  }

  FlowSolution out;
  out.grid = system.grid;
  out.velocity.resize(system.velocity_row.size());
  for (std::size_t d = 0; d < system.velocity_row.size(); ++d) {
    const int r = system.velocity_row[d];
    out.velocity[d] = r >= 0 ? full[r] : system.dirichlet_value[d];
  }
  out.pressure.assign(full.data() + system.free_velocity, full.data() + system.free_velocity + system.pressure);
  out.mean_pressure_multiplier = system.mean_pressure_constraint ? full[n_full - 1] : 0.0;
  out.residual_norm = residual;
  return out;
}

}  // namespace tdflow
