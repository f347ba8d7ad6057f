#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tdflow/grid.hpp"

namespace tdflow {

/// Real values on the (nx+1) x (ny+1) node lattice of a DomainSpec,
/// row-major with x fastest (same order as Mesh::vertices).
class NodalScalarField {
 public:
  explicit NodalScalarField(const DomainSpec& grid, double fill = 0.0);
  NodalScalarField(const DomainSpec& grid, std::vector<double> values);

  const DomainSpec& grid() const { return grid_; }
  int cols() const { return grid_.nodes_x(); }
  int rows() const { return grid_.nodes_y(); }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t n) const { return values_[n]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator()(int i, int j) const { return values_[std::size_t(j) * cols() + i]; }
  double& operator()(int i, int j) { return values_[std::size_t(j) * cols() + i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double sum() const;
  double min() const;
  double max() const;

 private:
  DomainSpec grid_;
  std::vector<double> values_;
};

/// Plain sum over nodes of f * g (no cell-size factor).
double nodal_dot(const NodalScalarField& f, const NodalScalarField& g);

/// Binary fluid indicator chi1 on the node lattice; chi2 = 1 - chi1 is
/// derived, never stored.
class IndicatorField {
 public:
  IndicatorField(const DomainSpec& grid, std::vector<std::uint8_t> chi1);

  const DomainSpec& grid() const { return grid_; }
  std::size_t size() const { return chi1_.size(); }
  /// Number of fluid nodes (M).
  long volume() const { return volume_; }

  int chi1(std::size_t n) const { return chi1_[n]; }
  int chi2(std::size_t n) const { return 1 - chi1_[n]; }
  std::span<const std::uint8_t> chi1_values() const { return chi1_; }

  NodalScalarField fluid() const;
  NodalScalarField solid() const;

  /// Count of nodes whose phase differs from `other`.
  long flips_from(const IndicatorField& other) const;

  friend bool operator==(const IndicatorField& a, const IndicatorField& b) {
    return a.grid_ == b.grid_ && a.chi1_ == b.chi1_;
  }

 private:
  DomainSpec grid_;
  std::vector<std::uint8_t> chi1_;
  long volume_ = 0;
};

/// Number of 4-connected components of the fluid (or solid) node set.
int connected_components(const IndicatorField& chi, bool fluid = true);

}  // namespace tdflow
