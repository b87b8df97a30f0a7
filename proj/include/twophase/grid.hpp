#pragma once

#include "twophase/field.hpp"

namespace twophase {

/// Forward-difference gradient. The component along an axis is zero at that axis' last index.
VectorField gradient(const ScalarField& u);

/// Negated adjoint of gradient(): <gradient(u), w> == -<u, divergence(w)> for all u, w.
///
/// Along x: w.x(0, j) at the first column, w.x(i, j) - w.x(i-1, j) inside, and
/// -w.x(last-1, j) at the last column; y is analogous. A 1-pixel axis contributes zero.
ScalarField divergence(const VectorField& w);

/// divergence(gradient(u)). Interior stencil is the 5-point Laplacian; edge and corner
/// rows lose the missing neighbours (diagonal 3 and 2).
ScalarField laplacian(const ScalarField& u);

/// Number of 4-neighbours of (i, j) inside the grid, the diagonal of -laplacian().
int neighbour_count(int width, int height, int i, int j) noexcept;

/// Sum over pixels of a(i,j) * b(i,j).
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

}  // namespace twophase
