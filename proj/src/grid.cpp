#include "twophase/grid.hpp"

#include <stdexcept>

#include "twophase/parallel.hpp"

namespace twophase {

VectorField gradient(const ScalarField& u) {
  const int w = u.width();
  const int h = u.height();
  VectorField out(w, h);
  for_rows(h, u.size(), [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      for (int i = 0; i < w; ++i) {
        out.x(i, j) = i + 1 < w ? u(i + 1, j) - u(i, j) : 0.0;
        out.y(i, j) = j + 1 < h ? u(i, j + 1) - u(i, j) : 0.0;
      }
    }
  });
  return out;
}

ScalarField divergence(const VectorField& wf) {
  if (!wf.x.same_shape(wf.y)) throw std::invalid_argument("divergence: component shapes differ");
  const int w = wf.width();
  const int h = wf.height();
  ScalarField out(w, h);
  for_rows(h, out.size(), [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      for (int i = 0; i < w; ++i) {
        // The last index never holds a forward difference, so w(last) is ignored.
        const double dx = (i + 1 < w ? wf.x(i, j) : 0.0) - (i > 0 ? wf.x(i - 1, j) : 0.0);
        const double dy = (j + 1 < h ? wf.y(i, j) : 0.0) - (j > 0 ? wf.y(i, j - 1) : 0.0);
        out(i, j) = dx + dy;
      }
    }
  });
  return out;
}

ScalarField laplacian(const ScalarField& u) { return divergence(gradient(u)); }

int neighbour_count(int width, int height, int i, int j) noexcept {
  return (i > 0) + (i + 1 < width) + (j > 0) + (j + 1 < height);
}

double inner(const ScalarField& a, const ScalarField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("inner: shapes differ");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a.x, b.x) + inner(a.y, b.y);
}

}  // namespace twophase
