#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "setret/dense.hpp"
#include "setret/errors.hpp"
#include "setret/tokenizer.hpp"

namespace setret {

// Bag-of-hashed-tokens encoder: mean-pooled embedding rows followed by one
// tanh projection. Small enough to train on a CPU in seconds while keeping
// every gradient hand-checkable.
template <typename Scalar>
struct EncoderParams {
  MatX<Scalar> embed_table;  // n_buckets x d
  MatX<Scalar> proj_weight;  // d x d
  VecX<Scalar> proj_bias;    // d
  std::uint64_t seed = 0;

  Index dim() const { return proj_bias.size(); }
  Index n_buckets() const { return embed_table.rows(); }
};

template <typename Scalar>
struct DualEncoder {
  EncoderParams<Scalar> query_params;
  EncoderParams<Scalar> doc_params;
};

// Entries uniform in [-0.05, 0.05], deterministic per seed.
template <typename Scalar>
EncoderParams<Scalar> init_params(std::uint64_t seed, Index d, Index n_buckets) {
  if (d < 2) throw Error("embedding dim must be >= 2");
  if (n_buckets < 2 || (n_buckets & (n_buckets - 1)) != 0) {
    throw Error("n_buckets must be a power of two >= 2");
  }
  EncoderParams<Scalar> p;
  p.seed = seed;
  p.embed_table.resize(n_buckets, d);
  p.proj_weight.resize(d, d);
  p.proj_bias.resize(d);

  std::mt19937_64 engine(seed);
  const auto draw = [&engine]() {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0,1)
    return static_cast<Scalar>(0.1 * u - 0.05);
  };
  for (Index r = 0; r < n_buckets; ++r) {
    for (Index c = 0; c < d; ++c) p.embed_table(r, c) = draw();
  }
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) p.proj_weight(r, c) = draw();
  }
  for (Index r = 0; r < d; ++r) p.proj_bias(r) = draw();
  return p;
}

// Mean of the touched embedding rows; empty input pools to the zero vector.
template <typename Scalar>
VecX<Scalar> pool_tokens(const EncoderParams<Scalar>& params, std::span<const int> ids) {
  VecX<Scalar> x = VecX<Scalar>::Zero(params.dim());
  if (ids.empty()) return x;
  for (const int t : ids) x += params.embed_table.row(t).transpose();
  x /= static_cast<Scalar>(ids.size());
  return x;
}

template <typename Scalar>
VecX<Scalar> encode(const EncoderParams<Scalar>& params, std::span<const int> ids) {
  const VecX<Scalar> x = pool_tokens(params, ids);
  return ((params.proj_weight * x + params.proj_bias).array().tanh()).matrix();
}

template <typename Scalar>
struct EncoderGrad {
  MatX<Scalar> embed_table;
  MatX<Scalar> proj_weight;
  VecX<Scalar> proj_bias;

  static EncoderGrad zeros_like(const EncoderParams<Scalar>& p) {
    EncoderGrad g;
    g.embed_table = MatX<Scalar>::Zero(p.embed_table.rows(), p.embed_table.cols());
    g.proj_weight = MatX<Scalar>::Zero(p.proj_weight.rows(), p.proj_weight.cols());
    g.proj_bias = VecX<Scalar>::Zero(p.proj_bias.size());
    return g;
  }

  void set_zero() {
    embed_table.setZero();
    proj_weight.setZero();
    proj_bias.setZero();
  }
};

// Adds the gradient of <upstream, encode(params, ids)> into acc. Only the
// touched embedding rows receive non-zero contributions.
template <typename Scalar>
void encode_accumulate_grad(const EncoderParams<Scalar>& params, std::span<const int> ids,
                            const VecX<Scalar>& upstream, EncoderGrad<Scalar>& acc) {
  if (upstream.size() != params.dim()) {
    throw ShapeMismatchError("upstream gradient size does not match embedding dim");
  }
  const VecX<Scalar> x = pool_tokens(params, ids);
  const VecX<Scalar> y = ((params.proj_weight * x + params.proj_bias).array().tanh()).matrix();
  const VecX<Scalar> dz =
      ((Scalar(1) - y.array().square()) * upstream.array()).matrix();

  acc.proj_weight.noalias() += dz * x.transpose();
  acc.proj_bias += dz;
  if (!ids.empty()) {
    const VecX<Scalar> dx = params.proj_weight.transpose() * dz;
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(ids.size());
    for (const int t : ids) {
      acc.embed_table.row(t) += (inv_n * dx).transpose();
    }
  }
}

template <typename Scalar>
EncoderGrad<Scalar> encode_grad(const EncoderParams<Scalar>& params, std::span<const int> ids,
                                const VecX<Scalar>& upstream) {
  auto g = EncoderGrad<Scalar>::zeros_like(params);
  encode_accumulate_grad(params, ids, upstream, g);
  return g;
}

}  // namespace setret
