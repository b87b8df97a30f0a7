#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace twophase {

/// Dense 2-D grid stored row-major. Pixel (i, j) is column i, row j.
template <class T>
class Field {
 public:
  using value_type = T;

  Field() = default;
  Field(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("Field: negative size");
    values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Field(int width, int height, std::vector<T> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width < 0 || height < 0 ||
        values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("Field: value count does not match width*height");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(int i, int j) noexcept { return values_[index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return values_[index(i, j)]; }

  T& operator[](std::size_t k) noexcept { return values_[k]; }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  template <class U>
  bool same_shape(const Field<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Field&) const = default;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(i);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using ScalarField = Field<double>;

/// Binary segmentation: 1 = foreground, 0 = background.
using Mask = Field<std::uint8_t>;

/// Pair of scalar components sharing one shape (gradients, d, b).
struct VectorField {
  ScalarField x;
  ScalarField y;

  VectorField() = default;
  VectorField(int width, int height, double fill = 0.0)
      : x(width, height, fill), y(width, height, fill) {}
  VectorField(ScalarField x_, ScalarField y_) : x(std::move(x_)), y(std::move(y_)) {
    if (!x.same_shape(y)) throw std::invalid_argument("VectorField: component shapes differ");
  }

  int width() const noexcept { return x.width(); }
  int height() const noexcept { return x.height(); }

  bool operator==(const VectorField&) const = default;
};

}  // namespace twophase
