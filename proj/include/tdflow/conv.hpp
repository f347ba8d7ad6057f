#pragma once

#include "tdflow/fields.hpp"

namespace tdflow {

/// Lattice boundary treatment for the heat-kernel convolution.
///  periodic: the node lattice is a torus of (nx+1) x (ny+1) points.
///  mirror:   even reflection about the first and last node on each axis
///            (discrete Neumann heat flow); for sensitivity studies only.
enum class ConvBoundary { periodic, mirror };

/// G_tau * field computed spectrally: forward DFT, multiply by the heat
/// semigroup symbol exp(-tau |k|^2) at the lattice angular frequencies,
/// inverse DFT. The lattice spacing is field.grid().h().
///
/// Thread-safe; FFT plans are cached per lattice shape.
NodalScalarField gaussian_convolve(const NodalScalarField& field, double tau,
                                   ConvBoundary boundary = ConvBoundary::periodic);

/// Quadratic-cost periodic direct summation against the sampled Gaussian
/// (all periodic images included) with weights normalized to unit sum.
/// Test oracle; refuses lattices with more than 64 nodes per axis.
///
/// It matches gaussian_convolve to round-off once h <= 0.6 sqrt(tau); for
/// coarser lattices the sampled kernel aliases in frequency.
NodalScalarField direct_convolve_oracle(const NodalScalarField& field, double tau);

}  // namespace tdflow
