#include "tdflow/fields.hpp"

#include <algorithm>
#include <numeric>

#include "tdflow/error.hpp"

namespace tdflow {

NodalScalarField::NodalScalarField(const DomainSpec& grid, double fill)
    : grid_(grid), values_(std::size_t(grid.node_count()), fill) {
  grid_.validate();
}

NodalScalarField::NodalScalarField(const DomainSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != std::size_t(grid_.node_count())) {
    throw ArgumentError("nodal field: expected " + std::to_string(grid_.node_count()) +
                        " values, got " + std::to_string(values_.size()));
  }
}

double NodalScalarField::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double NodalScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double NodalScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double nodal_dot(const NodalScalarField& f, const NodalScalarField& g) {
  if (!(f.grid() == g.grid())) throw ArgumentError("nodal_dot: grid mismatch");
  return std::inner_product(f.values().begin(), f.values().end(), g.values().begin(), 0.0);
}

IndicatorField::IndicatorField(const DomainSpec& grid, std::vector<std::uint8_t> chi1)
    : grid_(grid), chi1_(std::move(chi1)) {
  grid_.validate();
  if (chi1_.size() != std::size_t(grid_.node_count())) {
    throw ArgumentError("indicator: expected " + std::to_string(grid_.node_count()) +
                        " values, got " + std::to_string(chi1_.size()));
  }
  for (auto v : chi1_) {
    if (v > 1) throw ArgumentError("indicator: values must be 0 or 1");
    volume_ += v;
  }
}

NodalScalarField IndicatorField::fluid() const {
  std::vector<double> out(chi1_.begin(), chi1_.end());
  return NodalScalarField(grid_, std::move(out));
}

NodalScalarField IndicatorField::solid() const {
  std::vector<double> out(chi1_.size());
  std::transform(chi1_.begin(), chi1_.end(), out.begin(), [](std::uint8_t v) { return 1.0 - v; });
  return NodalScalarField(grid_, std::move(out));
}

long IndicatorField::flips_from(const IndicatorField& other) const {
  if (!(grid_ == other.grid_)) throw ArgumentError("indicator: grid mismatch");
  long n = 0;
  for (std::size_t k = 0; k < chi1_.size(); ++k) n += chi1_[k] != other.chi1_[k];
  return n;
}

int connected_components(const IndicatorField& chi, bool fluid) {
  const int nx = chi.grid().nodes_x();
  const int ny = chi.grid().nodes_y();
  const int want = fluid ? 1 : 0;
  std::vector<std::uint8_t> seen(chi.size(), 0);
  std::vector<int> stack;
  int components = 0;
  for (std::size_t start = 0; start < chi.size(); ++start) {
    if (seen[start] || chi.chi1(start) != want) continue;
    ++components;
    seen[start] = 1;
    stack.assign(1, int(start));
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      const int i = n % nx;
      const int j = n / nx;
      const int nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nbr) {
        if (q[0] < 0 || q[0] >= nx || q[1] < 0 || q[1] >= ny) continue;
        const int m = q[1] * nx + q[0];
        if (!seen[m] && chi.chi1(m) == want) {
          seen[m] = 1;
          stack.push_back(m);
        }
      }
    }
  }
  return components;
}

}  // namespace tdflow
