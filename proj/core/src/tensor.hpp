#pragma once

#include <cstddef>
#include <vector>

#include "tbh/linalg.hpp"

namespace tbh::detail {

/// Row-major dense tensor: the first axis is the most significant.
struct Tensor {
  std::vector<int> dims;
  Vector data;
};

std::size_t volume(const std::vector<int>& dims);

/// Result axis k is input axis perm[k].
Tensor permute(const Tensor& t, const std::vector<int>& perm);

/// Contracts `m` (rows = product of out_dims, cols = product of the dims of
/// `axes`) with the listed axes. The result carries the new axes first, then
/// the untouched axes in their original order.
Tensor contract_front(const Tensor& t, const std::vector<int>& axes, const Matrix& m,
                      const std::vector<int>& out_dims);

/// Moves the leading `count` axes so that they occupy `positions` (sorted
/// or not) in the result; the remaining axes fill the other slots in order.
Tensor place_front(const Tensor& t, std::size_t count, const std::vector<int>& positions);

}  // namespace tbh::detail
