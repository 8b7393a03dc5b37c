#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "setret/dense.hpp"
#include "setret/errors.hpp"

namespace setret {

struct LossConfig {
  double epsilon = 1.0;  // triplet margin
  int l = 2;             // positives per anchor in the inversed-contrastive form

  void validate() const {
    if (!(epsilon > 0.0)) throw Error("triplet margin must be > 0");
    if (l < 1) throw Error("positives per anchor must be >= 1");
  }
};

template <typename Scalar>
Scalar dot(const VecX<Scalar>& u, const VecX<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeMismatchError("dot: vector sizes differ");
  return u.dot(v);
}

template <typename Scalar>
Scalar cosine(const VecX<Scalar>& u, const VecX<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeMismatchError("cosine: vector sizes differ");
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) {
    throw ZeroVectorError("cosine similarity of a zero vector is undefined");
  }
  return u.dot(v) / (nu * nv);
}

namespace detail {

// d cos(u, v) / du = v/(|u||v|) - cos(u,v) * u/|u|^2
template <typename Scalar>
VecX<Scalar> cosine_grad_wrt_first(const VecX<Scalar>& u, const VecX<Scalar>& v, Scalar cos_uv) {
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  return v / (nu * nv) - (cos_uv / (nu * nu)) * u;
}

// Stable log-sum-exp over a flat span.
template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> vals) {
  Scalar m = vals[0];
  for (const Scalar v : vals) m = std::max(m, v);
  Scalar sum = Scalar(0);
  for (const Scalar v : vals) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Softmax written into probs, same max-shift as log_sum_exp.
template <typename Scalar>
void softmax(std::span<const Scalar> vals, std::vector<Scalar>& probs) {
  Scalar m = vals[0];
  for (const Scalar v : vals) m = std::max(m, v);
  probs.resize(vals.size());
  Scalar sum = Scalar(0);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    probs[i] = std::exp(vals[i] - m);
    sum += probs[i];
  }
  for (Scalar& p : probs) p /= sum;
}

}  // namespace detail

template <typename Scalar>
struct TripletLossResult {
  Scalar value = Scalar(0);
  VecX<Scalar> d_anchor, d_positive, d_negative;
};

// Hinge on cosine similarities: max(0, eps - cos(p,p+) + cos(p,p-)).
// Gradients are identically zero when the hinge is inactive.
template <typename Scalar>
TripletLossResult<Scalar> triplet_loss(const VecX<Scalar>& anchor, const VecX<Scalar>& positive,
                                       const VecX<Scalar>& negative, Scalar epsilon = Scalar(1)) {
  const Scalar cos_pos = cosine(anchor, positive);
  const Scalar cos_neg = cosine(anchor, negative);
  const Scalar raw = epsilon - cos_pos + cos_neg;

  TripletLossResult<Scalar> r;
  r.d_anchor = VecX<Scalar>::Zero(anchor.size());
  r.d_positive = VecX<Scalar>::Zero(anchor.size());
  r.d_negative = VecX<Scalar>::Zero(anchor.size());
  if (raw <= Scalar(0)) return r;

  r.value = raw;
  r.d_anchor = detail::cosine_grad_wrt_first(anchor, negative, cos_neg) -
               detail::cosine_grad_wrt_first(anchor, positive, cos_pos);
  r.d_positive = -detail::cosine_grad_wrt_first(positive, anchor, cos_pos);
  r.d_negative = detail::cosine_grad_wrt_first(negative, anchor, cos_neg);
  return r;
}

template <typename Scalar>
struct ContrastiveLossResult {
  Scalar value = Scalar(0);
  VecX<Scalar> d_anchor, d_positive;
  MatX<Scalar> d_negatives;  // column j = gradient w.r.t. negatives.col(j)
};

// -log softmax of dot(p, p+) over {p+} and the negatives (columns).
template <typename Scalar>
ContrastiveLossResult<Scalar> contrastive_loss(const VecX<Scalar>& anchor,
                                               const VecX<Scalar>& positive,
                                               const MatX<Scalar>& negatives) {
  if (negatives.cols() < 1) throw Error("contrastive loss requires at least one negative");
  if (negatives.rows() != anchor.size() || positive.size() != anchor.size()) {
    throw ShapeMismatchError("contrastive loss: embedding dims differ");
  }

  const Index n = negatives.cols();
  std::vector<Scalar> sims(static_cast<std::size_t>(n) + 1);
  sims[0] = anchor.dot(positive);
  const VecX<Scalar> neg_sims = negatives.transpose() * anchor;
  for (Index j = 0; j < n; ++j) sims[static_cast<std::size_t>(j) + 1] = neg_sims(j);

  std::vector<Scalar> probs;
  detail::softmax<Scalar>(sims, probs);
  ContrastiveLossResult<Scalar> r;
  r.value = detail::log_sum_exp<Scalar>(sims) - sims[0];

  r.d_anchor = (probs[0] - Scalar(1)) * positive;
  for (Index j = 0; j < n; ++j) {
    r.d_anchor += probs[static_cast<std::size_t>(j) + 1] * negatives.col(j);
  }
  r.d_positive = (probs[0] - Scalar(1)) * anchor;
  r.d_negatives.resize(anchor.size(), n);
  for (Index j = 0; j < n; ++j) {
    r.d_negatives.col(j) = probs[static_cast<std::size_t>(j) + 1] * anchor;
  }
  return r;
}

template <typename Scalar>
struct InvContrastiveLossResult {
  Scalar value = Scalar(0);
  VecX<Scalar> d_anchor, d_primary_negative;
  MatX<Scalar> d_positives;
  MatX<Scalar> d_inbatch_negatives;
};

// Softmax over negated dot products: the primary negative competes against
// the anchor's own positives and the in-batch negatives. Minimizing the loss
// drives sim(anchor, primary negative) below every other similarity.
template <typename Scalar>
InvContrastiveLossResult<Scalar> inversed_contrastive_loss(const VecX<Scalar>& anchor,
                                                           const VecX<Scalar>& primary_negative,
                                                           const MatX<Scalar>& positives,
                                                           const MatX<Scalar>& inbatch_negatives) {
  if (positives.cols() < 1) throw Error("inversed-contrastive loss requires >= 1 positive");
  if (primary_negative.size() != anchor.size() || positives.rows() != anchor.size() ||
      (inbatch_negatives.cols() > 0 && inbatch_negatives.rows() != anchor.size())) {
    throw ShapeMismatchError("inversed-contrastive loss: embedding dims differ");
  }

  const Index l = positives.cols();
  const Index n = inbatch_negatives.cols();
  std::vector<Scalar> negated(static_cast<std::size_t>(1 + l + n));
  negated[0] = -anchor.dot(primary_negative);
  const VecX<Scalar> pos_sims = positives.transpose() * anchor;
  for (Index k = 0; k < l; ++k) negated[static_cast<std::size_t>(k) + 1] = -pos_sims(k);
  if (n > 0) {
    const VecX<Scalar> ib_sims = inbatch_negatives.transpose() * anchor;
    for (Index j = 0; j < n; ++j) {
      negated[static_cast<std::size_t>(l + j) + 1] = -ib_sims(j);
    }
  }

  std::vector<Scalar> probs;
  detail::softmax<Scalar>(negated, probs);
  InvContrastiveLossResult<Scalar> r;
  r.value = detail::log_sum_exp<Scalar>(negated) - negated[0];

  // dL/d sim0 = 1 - p0 ; dL/d sim_other = -p_other (sign flip from negation).
  r.d_anchor = (Scalar(1) - probs[0]) * primary_negative;
  r.d_positives.resize(anchor.size(), l);
  for (Index k = 0; k < l; ++k) {
    const Scalar coeff = -probs[static_cast<std::size_t>(k) + 1];
    r.d_anchor += coeff * positives.col(k);
    r.d_positives.col(k) = coeff * anchor;
  }
  r.d_inbatch_negatives.resize(anchor.size(), n);
  for (Index j = 0; j < n; ++j) {
    const Scalar coeff = -probs[static_cast<std::size_t>(l + j) + 1];
    r.d_anchor += coeff * inbatch_negatives.col(j);
    r.d_inbatch_negatives.col(j) = coeff * anchor;
  }
  r.d_primary_negative = (Scalar(1) - probs[0]) * anchor;
  return r;
}

// Index bookkeeping for one mini-batch: which embedding slot holds each
// sample's anchor, capped positives, and primary negative.
struct SampleSlots {
  int anchor = -1;
  std::vector<int> positives;
  int primary_negative = -1;
};

struct AnchorSlots {
  int sample = -1;
  int anchor = -1;
  int primary_negative = -1;
  std::vector<int> positives;
  std::vector<int> inbatch_negatives;
};

// For each anchor: own positives (first l), own primary negative, and the
// positives and negatives of every other sample in the batch as in-batch
// negatives. An embedding never serves as its own negative.
std::vector<AnchorSlots> assemble_in_batch(std::span<const SampleSlots> batch, int l);

}  // namespace setret
