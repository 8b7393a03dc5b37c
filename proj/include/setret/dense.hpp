#pragma once

#include <Eigen/Core>

#include <span>

namespace setret {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matd = MatX<double>;
using Vecd = VecX<double>;

using Index = Eigen::Index;

// Column-gather: out.col(j) = source[indices[j]].
template <typename Scalar>
MatX<Scalar> gather_columns(std::span<const VecX<Scalar>> source, std::span<const int> indices) {
  const Index d = source.empty() ? 0 : source[0].size();
  MatX<Scalar> out(d, static_cast<Index>(indices.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j) = source[static_cast<std::size_t>(indices[static_cast<std::size_t>(j)])];
  }
  return out;
}

}  // namespace setret
