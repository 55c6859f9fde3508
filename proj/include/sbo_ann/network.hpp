#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sbo_ann/error.hpp"

namespace sbo_ann {

/// Layer sizes, input first. Every layer after the first has a weight
/// matrix (rows = this layer, cols = previous layer) and a bias vector.
/// Hidden layers use tansig, the output layer is linear.
class NetworkShape {
public:
  NetworkShape() : sizes_{8, 4, 1} {}
  explicit NetworkShape(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2)
      throw DimensionError("a network needs at least an input and an output layer");
    for (auto s : sizes_)
      if (s < 1)
        throw DimensionError("every layer size must be at least 1");
  }

  const std::vector<std::size_t> &sizes() const noexcept { return sizes_; }
  std::size_t inputs() const noexcept { return sizes_.front(); }
  std::size_t outputs() const noexcept { return sizes_.back(); }
  std::size_t layer_count() const noexcept { return sizes_.size() - 1; }

  std::size_t param_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l)
      n += sizes_[l] * sizes_[l - 1] + sizes_[l];
    return n;
  }

  friend bool operator==(const NetworkShape &, const NetworkShape &) = default;

private:
  std::vector<std::size_t> sizes_;
};

inline std::size_t param_count(const NetworkShape &shape) { return shape.param_count(); }

/// tansig(z) = 2 / (1 + exp(-2z)) - 1, evaluated as tanh(z), which is the
/// same function and does not overflow for large |z|.
inline double tansig(double z) { return std::tanh(z); }

namespace detail {

inline void check_forward_args(const NetworkShape &shape, std::span<const double> params,
                               std::span<const double> input) {
  if (params.size() != shape.param_count())
    throw DimensionError("expected " + std::to_string(shape.param_count()) + " parameters, got " +
                         std::to_string(params.size()));
  if (input.size() != shape.inputs())
    throw DimensionError("expected input of length " + std::to_string(shape.inputs()) + ", got " +
                         std::to_string(input.size()));
  for (double v : input)
    if (!std::isfinite(v))
      throw ValidationError("non-finite network input");
}

// Leaves the output activations in `act`.
inline void forward_into(const NetworkShape &shape, std::span<const double> params,
                         std::span<const double> input, std::vector<double> &act,
                         std::vector<double> &next) {
  const auto &sizes = shape.sizes();
  act.assign(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    const std::size_t rows = sizes[l];
    const std::size_t cols = sizes[l - 1];
    const double *w = params.data() + offset;
    const double *b = w + rows * cols;
    const bool hidden = l + 1 < sizes.size();
    next.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double z = 0.0;
      for (std::size_t c = 0; c < cols; ++c)
        z += w[r * cols + c] * act[c];
      z += b[r];
      next[r] = hidden ? tansig(z) : z;
    }
    act.swap(next);
    offset += rows * cols + rows;
  }
}

} // namespace detail

/// Forward pass on a flat parameter vector laid out layer by layer as
/// [W row-major, b]. For [8,4,1] that is IW (4x8), b1, LW (1x4), b2.
inline std::vector<double> forward_flat(const NetworkShape &shape, std::span<const double> params,
                                        std::span<const double> input) {
  detail::check_forward_args(shape, params, input);
  std::vector<double> act;
  std::vector<double> next;
  detail::forward_into(shape, params, input, act, next);
  return act;
}

// Single-output pass used on the hot path of the training objective.
// Scratch buffers are per thread, so concurrent callers do not interfere.
inline double forward_scalar(const NetworkShape &shape, std::span<const double> params,
                             std::span<const double> input) {
  if (shape.outputs() != 1)
    throw DimensionError("forward_scalar needs a single-output network");
  detail::check_forward_args(shape, params, input);
  thread_local std::vector<double> act;
  thread_local std::vector<double> next;
  detail::forward_into(shape, params, input, act, next);
  return act.front();
}

/// Weights and biases of a feed-forward network, stored in the canonical
/// flat order. Named accessors cover the one-hidden-layer case:
/// iw (hidden x inputs), b1, lw (1 x hidden) and b2.
class NetworkParams {
public:
  NetworkParams() : NetworkParams(NetworkShape{}) {}
  explicit NetworkParams(NetworkShape shape)
      : shape_(std::move(shape)), values_(shape_.param_count(), 0.0) {}

  static NetworkParams unflatten(const NetworkShape &shape, std::span<const double> flat) {
    if (flat.size() != shape.param_count())
      throw DimensionError("parameter vector length mismatch: expected " +
                           std::to_string(shape.param_count()) + ", got " + std::to_string(flat.size()));
    for (double v : flat)
      if (!std::isfinite(v))
        throw ValidationError("non-finite network parameter");
    NetworkParams p(shape);
    p.values_.assign(flat.begin(), flat.end());
    return p;
  }

  /// Builds a one-hidden-layer, single-output network from named blocks.
  static NetworkParams from_blocks(const std::vector<std::vector<double>> &iw,
                                   const std::vector<double> &b1, const std::vector<double> &lw,
                                   double b2) {
    const std::size_t hidden = iw.size();
    if (hidden == 0 || b1.size() != hidden || lw.size() != hidden)
      throw DimensionError("iw, b1 and lw must agree on the hidden layer size");
    const std::size_t inputs = iw.front().size();
    std::vector<double> flat;
    flat.reserve(hidden * inputs + 2 * hidden + 1);
    for (const auto &row : iw) {
      if (row.size() != inputs)
        throw DimensionError("iw rows must all have the same length");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    flat.insert(flat.end(), b1.begin(), b1.end());
    flat.insert(flat.end(), lw.begin(), lw.end());
    flat.push_back(b2);
    return unflatten(NetworkShape({inputs, hidden, 1}), flat);
  }

  const NetworkShape &shape() const noexcept { return shape_; }
  std::span<const double> flatten() const noexcept { return values_; }

  bool single_hidden_layer() const noexcept {
    return shape_.layer_count() == 2 && shape_.outputs() == 1;
  }

  double iw(std::size_t row, std::size_t col) const {
    require_blocks();
    return values_.at(row * inputs() + col);
  }
  double b1(std::size_t i) const {
    require_blocks();
    return values_.at(hidden() * inputs() + i);
  }
  double lw(std::size_t i) const {
    require_blocks();
    return values_.at(hidden() * inputs() + hidden() + i);
  }
  double b2() const {
    require_blocks();
    return values_.back();
  }

  std::size_t inputs() const noexcept { return shape_.inputs(); }
  std::size_t hidden() const noexcept { return shape_.sizes()[1]; }

  friend bool operator==(const NetworkParams &, const NetworkParams &) = default;

private:
  void require_blocks() const {
    if (!single_hidden_layer())
      throw DimensionError("named blocks are only defined for one-hidden-layer networks");
  }

  NetworkShape shape_;
  std::vector<double> values_;
};

inline std::vector<double> flatten(const NetworkParams &p) {
  auto f = p.flatten();
  return {f.begin(), f.end()};
}

inline NetworkParams unflatten(const NetworkShape &shape, std::span<const double> flat) {
  return NetworkParams::unflatten(shape, flat);
}

inline double forward(const NetworkParams &params, std::span<const double> input) {
  return forward_scalar(params.shape(), params.flatten(), input);
}

/// The published ANN-SBO weights for the 8-4-1 UCS network. Inputs are in
/// the order CSC, TSC, CA, Dmax, SPC, FM, W/B, SR.
inline NetworkParams frozen_reference_model() {
  static const NetworkParams model = NetworkParams::from_blocks(
      {
          {0.6833, -0.5114, -0.5029, 0.2177, 0.6053, -0.8074, 0.5226, -0.6722},
          {0.3366, -0.7136, 0.8009, 0.4262, -0.8098, -0.7488, -0.2934, 0.1542},
          {0.5897, -0.8527, 0.6029, 0.4868, -0.3901, -0.6794, 0.3389, 0.6066},
          {0.3746, 1.0160, -0.6758, -0.0013, -0.8689, -0.0004, -0.5348, 0.3186},
      },
      {-1.6649, -0.5550, 0.5550, 1.6649}, {0.2191, 0.7574, -0.1970, -0.6422}, -0.5543);
  return model;
}

} // namespace sbo_ann
