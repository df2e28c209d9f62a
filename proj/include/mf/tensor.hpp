#ifndef MF_TENSOR_HPP
#define MF_TENSOR_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "mf/parallel.hpp"

namespace mf {

/// Phase-space variable id: q_i is i, p_i is N + i (axes 0-based).
using Var = int;
using Index = Eigen::Index;

/// Dense row-major tensor whose axes are labelled by phase-space variables.
/// The first variable is the outermost (slowest) axis.
template <class Scalar>
class Tensor {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tensor() = default;
  Tensor(std::vector<Var> vars, std::vector<Index> dims)
      : vars_(std::move(vars)), dims_(std::move(dims)) {
    check_shape();
    values_ = Vector::Zero(cell_count(dims_));
  }
  Tensor(std::vector<Var> vars, std::vector<Index> dims, Vector values)
      : vars_(std::move(vars)), dims_(std::move(dims)), values_(std::move(values)) {
    check_shape();
    if (values_.size() != cell_count(dims_))
      throw std::invalid_argument("tensor value count does not match shape");
  }

  const std::vector<Var>& vars() const { return vars_; }
  const std::vector<Index>& dims() const { return dims_; }
  int rank() const { return static_cast<int>(vars_.size()); }
  Index size() const { return values_.size(); }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Scalar operator[](Index i) const { return values_[i]; }
  Scalar& operator[](Index i) { return values_[i]; }

  Scalar& at(std::span<const Index> idx) { return values_[offset(idx)]; }
  Scalar at(std::span<const Index> idx) const { return values_[offset(idx)]; }

  int position(Var v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
  }
  bool has(Var v) const { return position(v) >= 0; }

  Index offset(std::span<const Index> idx) const {
    Index off = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) off = off * dims_[k] + idx[k];
    return off;
  }

  static Index cell_count(const std::vector<Index>& dims) {
    Index n = 1;
    for (auto d : dims) n *= d;
    return n;
  }

 private:
  void check_shape() const {
    if (vars_.size() != dims_.size()) throw std::invalid_argument("tensor vars/dims mismatch");
    for (auto d : dims_)
      if (d < 1) throw std::invalid_argument("tensor axis with no points");
    auto sorted = vars_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("repeated tensor variable");
  }

  std::vector<Var> vars_;
  std::vector<Index> dims_;
  Vector values_;
};

/// For each cell of the tensor shaped (full_vars, full_dims), the flat offset
/// of the matching cell in the tensor over `sub_vars` (any order, subset).
inline std::vector<Index> projection_map(const std::vector<Var>& full_vars,
                                         const std::vector<Index>& full_dims,
                                         const std::vector<Var>& sub_vars) {
  const std::size_t r = full_vars.size();
  std::vector<Index> sub_stride(sub_vars.size());
  {
    Index s = 1;
    for (std::size_t k = sub_vars.size(); k-- > 0;) {
      auto it = std::find(full_vars.begin(), full_vars.end(), sub_vars[k]);
      if (it == full_vars.end()) throw std::invalid_argument("projection onto foreign variable");
      sub_stride[k] = s;
      s *= full_dims[static_cast<std::size_t>(it - full_vars.begin())];
    }
  }
  std::vector<Index> stride(r, 0);
  for (std::size_t k = 0; k < sub_vars.size(); ++k) {
    auto pos = static_cast<std::size_t>(std::find(full_vars.begin(), full_vars.end(), sub_vars[k]) -
                                        full_vars.begin());
    stride[pos] = sub_stride[k];
  }
  const Index total = Tensor<double>::cell_count(full_dims);
  std::vector<Index> map(static_cast<std::size_t>(total));
  parallel_for(total, [&](Index begin, Index end) {
    std::vector<Index> idx(r);
    Index rem = begin, off = 0;
    for (std::size_t k = r; k-- > 0;) {
      idx[k] = rem % full_dims[k];
      rem /= full_dims[k];
      off += idx[k] * stride[k];
    }
    for (Index cell = begin; cell < end; ++cell) {
      map[static_cast<std::size_t>(cell)] = off;
      for (std::size_t k = r; k-- > 0;) {
        if (++idx[k] < full_dims[k]) {
          off += stride[k];
          break;
        }
        off -= (full_dims[k] - 1) * stride[k];
        idx[k] = 0;
      }
    }
  });
  return map;
}

/// Sums `t` over every variable not in `keep`; output axes follow `keep`.
template <class Scalar>
Tensor<Scalar> sum_onto(const Tensor<Scalar>& t, const std::vector<Var>& keep) {
  std::vector<Index> dims;
  for (Var v : keep) {
    const int p = t.position(v);
    if (p < 0) throw std::invalid_argument("sum_onto: variable not present");
    dims.push_back(t.dims()[static_cast<std::size_t>(p)]);
  }
  Tensor<Scalar> out(keep, dims);
  const auto map = projection_map(t.vars(), t.dims(), keep);
  // Fixed cell order keeps the accumulation deterministic.
  for (Index i = 0; i < t.size(); ++i) out[map[static_cast<std::size_t>(i)]] += t[i];
  return out;
}

/// Repeats `t` along the extra variables of (vars, dims).
template <class Scalar>
Tensor<Scalar> broadcast(const Tensor<Scalar>& t, const std::vector<Var>& vars,
                         const std::vector<Index>& dims) {
  Tensor<Scalar> out(vars, dims);
  const auto map = projection_map(vars, dims, t.vars());
  for (int k = 0; k < t.rank(); ++k) {
    const int p = out.position(t.vars()[static_cast<std::size_t>(k)]);
    if (out.dims()[static_cast<std::size_t>(p)] != t.dims()[static_cast<std::size_t>(k)])
      throw std::invalid_argument("broadcast: axis size mismatch");
  }
  parallel_for(out.size(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) out[i] = t[map[static_cast<std::size_t>(i)]];
  });
  return out;
}

template <class Scalar>
Tensor<Scalar> broadcast_like(const Tensor<Scalar>& t, const Tensor<Scalar>& like) {
  return broadcast(t, like.vars(), like.dims());
}

/// Same values, axes reordered to `order` (a permutation of t.vars()).
template <class Scalar>
Tensor<Scalar> permute(const Tensor<Scalar>& t, const std::vector<Var>& order) {
  if (order.size() != t.vars().size()) throw std::invalid_argument("permute: not a permutation");
  std::vector<Index> dims;
  for (Var v : order) {
    const int p = t.position(v);
    if (p < 0) throw std::invalid_argument("permute: not a permutation");
    dims.push_back(t.dims()[static_cast<std::size_t>(p)]);
  }
  return broadcast(t, order, dims);
}

}  // namespace mf

#endif  // MF_TENSOR_HPP
