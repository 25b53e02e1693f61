#include "tensor.hpp"

#include <numeric>

#include "tbh/errors.hpp"

namespace tbh::detail {

std::size_t volume(const std::vector<int>& dims) {
  std::size_t v = 1;
  for (int d : dims) v *= static_cast<std::size_t>(d);
  return v;
}

Tensor permute(const Tensor& t, const std::vector<int>& perm) {
  const std::size_t n = t.dims.size();
  if (perm.size() != n) throw DimensionError("permutation rank mismatch");
  bool identity = true;
  for (std::size_t k = 0; k < n; ++k) identity = identity && perm[k] == static_cast<int>(k);
  if (identity) return t;

  std::vector<std::size_t> in_stride(n, 1);
  for (std::size_t k = n; k-- > 1;) in_stride[k - 1] = in_stride[k] * static_cast<std::size_t>(t.dims[k]);

  Tensor out;
  out.dims.resize(n);
  std::vector<std::size_t> stride(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.dims[k] = t.dims[static_cast<std::size_t>(perm[k])];
    stride[k] = in_stride[static_cast<std::size_t>(perm[k])];
  }
  const std::size_t total = volume(out.dims);
  out.data.resize(static_cast<Eigen::Index>(total));
  if (total == 0) return out;

  // Walk the output in row-major order, tracking the matching input offset.
  std::vector<int> idx(n, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < total; ++dst) {
    out.data[static_cast<Eigen::Index>(dst)] = t.data[static_cast<Eigen::Index>(src)];
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < out.dims[k]) {
        src += stride[k];
        break;
      }
      src -= stride[k] * static_cast<std::size_t>(idx[k] - 1);
      idx[k] = 0;
    }
  }
  return out;
}

Tensor contract_front(const Tensor& t, const std::vector<int>& axes, const Matrix& m,
                      const std::vector<int>& out_dims) {
  const int n = static_cast<int>(t.dims.size());
  std::vector<int> perm(axes);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int a : axes) {
    if (a < 0 || a >= n || used[static_cast<std::size_t>(a)]) throw DimensionError("bad contraction axes");
    used[static_cast<std::size_t>(a)] = true;
  }
  std::vector<int> rest_dims;
  for (int k = 0; k < n; ++k) {
    if (!used[static_cast<std::size_t>(k)]) {
      perm.push_back(k);
      rest_dims.push_back(t.dims[static_cast<std::size_t>(k)]);
    }
  }
  Tensor p = permute(t, perm);
  std::size_t d_in = 1;
  for (int a : axes) d_in *= static_cast<std::size_t>(t.dims[static_cast<std::size_t>(a)]);
  const std::size_t d_out = volume(out_dims);
  const std::size_t rest = volume(rest_dims);
  if (static_cast<std::size_t>(m.cols()) != d_in || static_cast<std::size_t>(m.rows()) != d_out)
    throw DimensionError("operator shape does not match target modes");

  const auto R = static_cast<Eigen::Index>(rest);
  Eigen::Map<const Matrix> x(p.data.data(), R, static_cast<Eigen::Index>(d_in));
  Tensor out;
  out.dims = out_dims;
  out.dims.insert(out.dims.end(), rest_dims.begin(), rest_dims.end());
  out.data.resize(static_cast<Eigen::Index>(d_out * rest));
  Eigen::Map<Matrix> y(out.data.data(), R, static_cast<Eigen::Index>(d_out));
  y.noalias() = x * m.transpose();
  return out;
}

Tensor place_front(const Tensor& t, std::size_t count, const std::vector<int>& positions) {
  const std::size_t n = t.dims.size();
  if (positions.size() != count || count > n) throw DimensionError("bad placement");
  std::vector<int> perm(n, -1);
  for (std::size_t k = 0; k < count; ++k) perm[static_cast<std::size_t>(positions[k])] = static_cast<int>(k);
  int next = static_cast<int>(count);
  for (std::size_t k = 0; k < n; ++k)
    if (perm[k] < 0) perm[k] = next++;
  return permute(t, perm);
}

}  // namespace tbh::detail
