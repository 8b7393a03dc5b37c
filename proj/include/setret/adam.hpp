#pragma once

#include <cmath>
#include <vector>

#include "setret/dense.hpp"
#include "setret/encoder.hpp"
#include "setret/errors.hpp"

namespace setret {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename Scalar>
struct AdamState {
  long step_count = 0;
  std::vector<MatX<Scalar>> m, v;

  bool initialized() const { return !m.empty(); }
};

// Standard Adam with bias correction over a list of parameter blocks.
// The state is shaped on first use and must keep matching afterwards.
template <typename Scalar>
void adam_step(std::vector<Eigen::Ref<MatX<Scalar>>> params,
               const std::vector<Eigen::Ref<const MatX<Scalar>>>& grads,
               AdamState<Scalar>& state, const AdamConfig& cfg) {
  if (params.size() != grads.size()) {
    throw ShapeMismatchError("adam_step: parameter/gradient block counts differ");
  }
  if (!state.initialized()) {
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const auto& p : params) {
      state.m.push_back(MatX<Scalar>::Zero(p.rows(), p.cols()));
      state.v.push_back(MatX<Scalar>::Zero(p.rows(), p.cols()));
    }
  }
  if (state.m.size() != params.size()) {
    throw ShapeMismatchError("adam_step: state does not match parameter blocks");
  }

  state.step_count += 1;
  const Scalar b1 = static_cast<Scalar>(cfg.beta1);
  const Scalar b2 = static_cast<Scalar>(cfg.beta2);
  const Scalar corr1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(state.step_count));
  const Scalar corr2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(state.step_count));
  const Scalar lr = static_cast<Scalar>(cfg.lr);
  const Scalar eps = static_cast<Scalar>(cfg.eps);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const auto& g = grads[i];
    if (p.rows() != g.rows() || p.cols() != g.cols() || state.m[i].rows() != p.rows() ||
        state.m[i].cols() != p.cols()) {
      throw ShapeMismatchError("adam_step: block " + std::to_string(i) + " shape mismatch");
    }
    state.m[i] = b1 * state.m[i] + (Scalar(1) - b1) * g;
    state.v[i] = b2 * state.v[i] + (Scalar(1) - b2) * g.array().square().matrix();
    const MatX<Scalar> m_hat = state.m[i] / corr1;
    const MatX<Scalar> v_hat = state.v[i] / corr2;
    p -= lr * (m_hat.array() / (v_hat.array().sqrt() + eps)).matrix();
  }
}

template <typename Scalar>
std::vector<Eigen::Ref<MatX<Scalar>>> param_refs(EncoderParams<Scalar>& p) {
  std::vector<Eigen::Ref<MatX<Scalar>>> refs;
  refs.emplace_back(p.embed_table);
  refs.emplace_back(p.proj_weight);
  refs.emplace_back(p.proj_bias);
  return refs;
}

template <typename Scalar>
std::vector<Eigen::Ref<const MatX<Scalar>>> grad_refs(const EncoderGrad<Scalar>& g) {
  std::vector<Eigen::Ref<const MatX<Scalar>>> refs;
  refs.emplace_back(g.embed_table);
  refs.emplace_back(g.proj_weight);
  refs.emplace_back(g.proj_bias);
  return refs;
}

}  // namespace setret
