#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "setret/adam.hpp"
#include "setret/corpus.hpp"
#include "setret/datagen.hpp"
#include "setret/dense.hpp"
#include "setret/encoder.hpp"
#include "setret/losses.hpp"
#include "setret/rng.hpp"
#include "setret/tokenizer.hpp"

namespace setret {

enum class LossMode { inversed_contrastive, triplet, contrastive };
enum class LrSchedule { constant, linear_decay };

std::string_view loss_mode_label(LossMode mode);
LossMode loss_mode_from_label(std::string_view label);

struct TrainConfig {
  LossMode loss_mode = LossMode::inversed_contrastive;
  int epochs = 10;
  int batch_size = 64;  // 16 for the dual-encoder phase
  double lr = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  LrSchedule lr_schedule = LrSchedule::constant;
  int eval_every_steps = 200;
  int max_steps_phase2 = 1600;
  int negatives_per_query = 5;
  std::uint64_t seed = 0;
  LossConfig loss;

  void validate() const {
    if (epochs < 1) throw Error("epochs must be >= 1");
    if (batch_size < 1) throw Error("batch_size must be >= 1");
    if (uses_in_batch() && batch_size < 2) {
      throw BatchTooSmallError("in-batch negatives require batch_size >= 2");
    }
    if (lr < 0.0) throw Error("learning rate must be >= 0");
    if (eval_every_steps < 1) throw Error("eval_every_steps must be >= 1");
    if (max_steps_phase2 < 0) throw Error("max_steps_phase2 must be >= 0");
    if (negatives_per_query < 1) throw Error("negatives_per_query must be >= 1");
    loss.validate();
  }

  bool uses_in_batch() const { return loss_mode != LossMode::triplet; }

  AdamConfig adam(double lr_now) const { return {lr_now, adam_beta1, adam_beta2, adam_eps}; }
};

inline double scheduled_lr(const TrainConfig& cfg, long step, long total_steps) {
  if (cfg.lr_schedule == LrSchedule::constant || total_steps <= 0) return cfg.lr;
  return cfg.lr * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

template <typename Scalar>
struct Phase1Checkpoint {
  EncoderParams<Scalar> params;
  long step = 0;
  Scalar eval_loss = Scalar(0);
};

template <typename Scalar>
struct Phase2Checkpoint {
  DualEncoder<Scalar> dual;
  long step = 0;
  Scalar eval_loss = Scalar(0);
};

template <typename Scalar>
DualEncoder<Scalar> make_dual(const EncoderParams<Scalar>& shared) {
  return DualEncoder<Scalar>{shared, shared};
}

namespace detail {

struct TokenizedTriplet {
  std::vector<int> anchor;
  std::vector<std::vector<int>> positives;
  std::vector<std::vector<int>> negatives;
};

inline std::vector<TokenizedTriplet> tokenize_triplets(const std::vector<TripletSample>& samples,
                                                       const Tokenizer& tokenizer) {
  std::vector<TokenizedTriplet> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    TokenizedTriplet t;
    t.anchor = tokenizer.tokenize_query(s.anchor);
    for (const auto& p : s.positives) t.positives.push_back(tokenizer.tokenize_query(p));
    for (const auto& n : s.negatives) t.negatives.push_back(tokenizer.tokenize_query(n));
    out.push_back(std::move(t));
  }
  return out;
}

template <typename Scalar>
void check_finite(Scalar loss, long step, const char* where) {
  if (!std::isfinite(static_cast<double>(loss))) {
    throw DivergedLossError(std::string(where) + " loss diverged at step " +
                            std::to_string(step) + " (value " +
                            std::to_string(static_cast<double>(loss)) + ")");
  }
}

// Forward/backward over one triplet batch through a shared encoder. Returns
// the mean per-anchor loss; accumulates parameter gradients scaled by
// 1/n_anchors into grad when grad != nullptr.
template <typename Scalar>
Scalar triplet_batch_pass(const std::vector<TokenizedTriplet>& data,
                          const std::vector<std::size_t>& batch_ids, int round_robin,
                          const EncoderParams<Scalar>& params, const TrainConfig& cfg,
                          EncoderGrad<Scalar>* grad) {
  // Slot layout per sample: anchor, then the embedded positives, then the
  // primary negative. In-batch modes embed the first l positives; the
  // triplet baseline embeds one round-robin positive.
  std::vector<const std::vector<int>*> slot_tokens;
  std::vector<SampleSlots> samples;
  for (const std::size_t id : batch_ids) {
    const TokenizedTriplet& t = data[id];
    SampleSlots slots;
    slots.anchor = static_cast<int>(slot_tokens.size());
    slot_tokens.push_back(&t.anchor);
    if (cfg.loss_mode == LossMode::inversed_contrastive) {
      const auto l = std::min<std::size_t>(t.positives.size(),
                                           static_cast<std::size_t>(cfg.loss.l));
      for (std::size_t k = 0; k < l; ++k) {
        slots.positives.push_back(static_cast<int>(slot_tokens.size()));
        slot_tokens.push_back(&t.positives[k]);
      }
    } else {
      slots.positives.push_back(static_cast<int>(slot_tokens.size()));
      slot_tokens.push_back(
          &t.positives[static_cast<std::size_t>(round_robin) % t.positives.size()]);
    }
    slots.primary_negative = static_cast<int>(slot_tokens.size());
    slot_tokens.push_back(
        &t.negatives[static_cast<std::size_t>(round_robin) % t.negatives.size()]);
    samples.push_back(std::move(slots));
  }

  std::vector<VecX<Scalar>> emb(slot_tokens.size());
  for (std::size_t i = 0; i < slot_tokens.size(); ++i) {
    emb[i] = encode(params, std::span<const int>(*slot_tokens[i]));
  }
  std::vector<VecX<Scalar>> upstream(slot_tokens.size(),
                                     VecX<Scalar>::Zero(params.dim()));

  const Scalar inv_b = Scalar(1) / static_cast<Scalar>(samples.size());
  Scalar loss_sum = Scalar(0);

  const auto emb_span = std::span<const VecX<Scalar>>(emb);
  if (cfg.uses_in_batch()) {
    const std::vector<AnchorSlots> anchors = assemble_in_batch(samples, cfg.loss.l);
    for (const AnchorSlots& a : anchors) {
      const MatX<Scalar> positives = gather_columns<Scalar>(emb_span, a.positives);
      const MatX<Scalar> inbatch = gather_columns<Scalar>(emb_span, a.inbatch_negatives);
      if (cfg.loss_mode == LossMode::inversed_contrastive) {
        const auto r = inversed_contrastive_loss<Scalar>(
            emb[static_cast<std::size_t>(a.anchor)],
            emb[static_cast<std::size_t>(a.primary_negative)], positives, inbatch);
        loss_sum += r.value;
        if (grad != nullptr) {
          upstream[static_cast<std::size_t>(a.anchor)] += inv_b * r.d_anchor;
          upstream[static_cast<std::size_t>(a.primary_negative)] +=
              inv_b * r.d_primary_negative;
          for (std::size_t k = 0; k < a.positives.size(); ++k) {
            upstream[static_cast<std::size_t>(a.positives[k])] +=
                inv_b * r.d_positives.col(static_cast<Index>(k));
          }
          for (std::size_t j = 0; j < a.inbatch_negatives.size(); ++j) {
            upstream[static_cast<std::size_t>(a.inbatch_negatives[j])] +=
                inv_b * r.d_inbatch_negatives.col(static_cast<Index>(j));
          }
        }
      } else {
        // Plain contrastive: the first embedded positive is the target; the
        // primary negative and the in-batch pool are the negatives.
        MatX<Scalar> negatives(params.dim(), 1 + static_cast<Index>(a.inbatch_negatives.size()));
        negatives.col(0) = emb[static_cast<std::size_t>(a.primary_negative)];
        for (std::size_t j = 0; j < a.inbatch_negatives.size(); ++j) {
          negatives.col(1 + static_cast<Index>(j)) =
              emb[static_cast<std::size_t>(a.inbatch_negatives[j])];
        }
        const auto r = contrastive_loss<Scalar>(
            emb[static_cast<std::size_t>(a.anchor)],
            emb[static_cast<std::size_t>(a.positives[0])], negatives);
        loss_sum += r.value;
        if (grad != nullptr) {
          upstream[static_cast<std::size_t>(a.anchor)] += inv_b * r.d_anchor;
          upstream[static_cast<std::size_t>(a.positives[0])] += inv_b * r.d_positive;
          upstream[static_cast<std::size_t>(a.primary_negative)] +=
              inv_b * r.d_negatives.col(0);
          for (std::size_t j = 0; j < a.inbatch_negatives.size(); ++j) {
            upstream[static_cast<std::size_t>(a.inbatch_negatives[j])] +=
                inv_b * r.d_negatives.col(1 + static_cast<Index>(j));
          }
        }
      }
    }
  } else {
    for (const SampleSlots& s : samples) {
      const auto r = triplet_loss<Scalar>(emb[static_cast<std::size_t>(s.anchor)],
                                          emb[static_cast<std::size_t>(s.positives[0])],
                                          emb[static_cast<std::size_t>(s.primary_negative)],
                                          static_cast<Scalar>(cfg.loss.epsilon));
      loss_sum += r.value;
      if (grad != nullptr) {
        upstream[static_cast<std::size_t>(s.anchor)] += inv_b * r.d_anchor;
        upstream[static_cast<std::size_t>(s.positives[0])] += inv_b * r.d_positive;
        upstream[static_cast<std::size_t>(s.primary_negative)] += inv_b * r.d_negative;
      }
    }
  }

  if (grad != nullptr) {
    for (std::size_t i = 0; i < slot_tokens.size(); ++i) {
      encode_accumulate_grad(params, std::span<const int>(*slot_tokens[i]), upstream[i], *grad);
    }
  }
  return loss_sum / static_cast<Scalar>(samples.size());
}

// Mean per-anchor loss over the whole eval split, batched deterministically
// in file order with round-robin index 0.
template <typename Scalar>
Scalar phase1_eval_loss(const std::vector<TokenizedTriplet>& eval_data,
                        const EncoderParams<Scalar>& params, const TrainConfig& cfg) {
  const std::size_t min_batch = cfg.uses_in_batch() ? 2 : 1;
  Scalar sum = Scalar(0);
  std::size_t n_anchors = 0;
  for (std::size_t start = 0; start < eval_data.size();
       start += static_cast<std::size_t>(cfg.batch_size)) {
    const std::size_t end =
        std::min(eval_data.size(), start + static_cast<std::size_t>(cfg.batch_size));
    if (end - start < min_batch) break;
    std::vector<std::size_t> ids;
    for (std::size_t i = start; i < end; ++i) ids.push_back(i);
    sum += triplet_batch_pass<Scalar>(eval_data, ids, 0, params, cfg, nullptr) *
           static_cast<Scalar>(ids.size());
    n_anchors += ids.size();
  }
  if (n_anchors == 0) {
    throw BatchTooSmallError("eval split too small for in-batch loss evaluation");
  }
  return sum / static_cast<Scalar>(n_anchors);
}

}  // namespace detail

// Fine-tunes one shared encoder on the triplet dataset. Shuffles per epoch,
// evaluates on the eval split every eval_every_steps (and at step 0), and
// returns the checkpoint with the smallest eval loss.
template <typename Scalar>
Phase1Checkpoint<Scalar> train_phase1(const std::vector<TripletSample>& train,
                                      const std::vector<TripletSample>& eval,
                                      const Tokenizer& tokenizer, EncoderParams<Scalar> init,
                                      const TrainConfig& cfg,
                                      std::ostream* metrics_log = nullptr) {
  cfg.validate();
  if (train.empty() || eval.empty()) throw Error("train and eval splits must be non-empty");
  if (cfg.uses_in_batch() && train.size() < 2) {
    throw BatchTooSmallError("in-batch loss needs at least 2 training samples");
  }

  const auto train_tok = detail::tokenize_triplets(train, tokenizer);
  const auto eval_tok = detail::tokenize_triplets(eval, tokenizer);

  EncoderParams<Scalar> params = std::move(init);
  AdamState<Scalar> adam_state;
  Rng shuffle_rng(derive_seed(cfg.seed, "phase1-shuffle"));

  const std::size_t min_batch = cfg.uses_in_batch() ? 2 : 1;
  std::size_t steps_per_epoch = 0;
  for (std::size_t start = 0; start < train_tok.size();
       start += static_cast<std::size_t>(cfg.batch_size)) {
    const std::size_t end =
        std::min(train_tok.size(), start + static_cast<std::size_t>(cfg.batch_size));
    if (end - start >= min_batch) ++steps_per_epoch;
  }
  const long total_steps = static_cast<long>(steps_per_epoch) * cfg.epochs;

  Phase1Checkpoint<Scalar> best{params, 0,
                                detail::phase1_eval_loss<Scalar>(eval_tok, params, cfg)};
  detail::check_finite(best.eval_loss, 0, "eval");
  Scalar last_eval = best.eval_loss;

  if (metrics_log != nullptr) {
    *metrics_log << "step\ttrain_loss\teval_loss\n";
  }

  std::vector<std::size_t> order(train_tok.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      if (end - start < min_batch) break;
      const std::vector<std::size_t> batch_ids(order.begin() + static_cast<std::ptrdiff_t>(start),
                                               order.begin() + static_cast<std::ptrdiff_t>(end));

      auto grad = EncoderGrad<Scalar>::zeros_like(params);
      const Scalar train_loss =
          detail::triplet_batch_pass<Scalar>(train_tok, batch_ids, epoch, params, cfg, &grad);
      detail::check_finite(train_loss, step, "train");

      adam_step<Scalar>(param_refs(params), grad_refs(grad), adam_state,
                        cfg.adam(scheduled_lr(cfg, step, total_steps)));
      ++step;

      if (step % cfg.eval_every_steps == 0) {
        last_eval = detail::phase1_eval_loss<Scalar>(eval_tok, params, cfg);
        detail::check_finite(last_eval, step, "eval");
        if (last_eval < best.eval_loss) {
          best = {params, step, last_eval};
        }
      }
      if (metrics_log != nullptr) {
        char line[96];
        std::snprintf(line, sizeof(line), "%ld\t%.6f\t%.6f\n", step,
                      static_cast<double>(train_loss), static_cast<double>(last_eval));
        *metrics_log << line;
      }
    }
  }

  // Final evaluation in case the last steps were between eval points.
  if (step % cfg.eval_every_steps != 0) {
    const Scalar final_eval = detail::phase1_eval_loss<Scalar>(eval_tok, params, cfg);
    detail::check_finite(final_eval, step, "eval");
    if (final_eval < best.eval_loss) {
      best = {params, step, final_eval};
    }
  }
  return best;
}

namespace detail {

template <typename Scalar>
struct Phase2Example {
  std::vector<int> query_tokens;
  DocId positive = 0;
  std::vector<DocId> relevant;
};

template <typename Scalar>
Scalar phase2_example_loss(const Phase2Example<Scalar>& ex, std::span<const DocId> negatives,
                           const std::vector<std::vector<int>>& doc_tokens,
                           const DualEncoder<Scalar>& dual, Scalar inv_b,
                           EncoderGrad<Scalar>* query_grad, EncoderGrad<Scalar>* doc_grad) {
  const VecX<Scalar> q = encode(dual.query_params, std::span<const int>(ex.query_tokens));
  const auto& pos_tokens = doc_tokens[static_cast<std::size_t>(ex.positive)];
  const VecX<Scalar> pos = encode(dual.doc_params, std::span<const int>(pos_tokens));
  MatX<Scalar> negs(q.size(), static_cast<Index>(negatives.size()));
  for (std::size_t j = 0; j < negatives.size(); ++j) {
    negs.col(static_cast<Index>(j)) = encode(
        dual.doc_params, std::span<const int>(doc_tokens[static_cast<std::size_t>(negatives[j])]));
  }

  const auto r = contrastive_loss<Scalar>(q, pos, negs);
  if (query_grad != nullptr && doc_grad != nullptr) {
    encode_accumulate_grad(dual.query_params, std::span<const int>(ex.query_tokens),
                           (inv_b * r.d_anchor).eval(), *query_grad);
    encode_accumulate_grad(dual.doc_params, std::span<const int>(pos_tokens),
                           (inv_b * r.d_positive).eval(), *doc_grad);
    for (std::size_t j = 0; j < negatives.size(); ++j) {
      encode_accumulate_grad(
          dual.doc_params,
          std::span<const int>(doc_tokens[static_cast<std::size_t>(negatives[j])]),
          (inv_b * r.d_negatives.col(static_cast<Index>(j))).eval(), *doc_grad);
    }
  }
  return r.value;
}

inline std::vector<DocId> sample_negatives(Rng& rng, int count, int n_docs,
                                           const std::vector<DocId>& relevant) {
  std::vector<DocId> negs;
  while (static_cast<int>(negs.size()) < count) {
    const auto candidate = static_cast<DocId>(rng.below(static_cast<std::uint64_t>(n_docs)));
    if (std::binary_search(relevant.begin(), relevant.end(), candidate)) continue;
    if (std::find(negs.begin(), negs.end(), candidate) != negs.end()) continue;
    negs.push_back(candidate);
  }
  return negs;
}

}  // namespace detail

// DPR-style dual-encoder training on benchmark queries: one positive
// document (smallest relevant id) and uniformly sampled non-relevant
// negatives per query, optimized with the contrastive loss. Keeps the best
// checkpoint by eval loss, evaluated on held-out queries with negatives
// fixed up front.
template <typename Scalar>
Phase2Checkpoint<Scalar> train_phase2_de(const Corpus& corpus,
                                         const std::vector<JudgedQuery>& train_queries,
                                         const std::vector<JudgedQuery>& eval_queries,
                                         const Tokenizer& tokenizer, DualEncoder<Scalar> init,
                                         const TrainConfig& cfg,
                                         std::ostream* metrics_log = nullptr) {
  cfg.validate();
  if (train_queries.empty() || eval_queries.empty()) {
    throw Error("phase 2 needs non-empty train and eval query sets");
  }
  const int n_docs = static_cast<int>(corpus.size());
  if (n_docs <= cfg.negatives_per_query) {
    throw Error("corpus too small to sample distinct negative documents");
  }

  std::vector<std::vector<int>> doc_tokens;
  doc_tokens.reserve(corpus.size());
  for (const Document& d : corpus.docs()) {
    doc_tokens.push_back(tokenizer.tokenize_document(d.text));
  }

  const auto make_examples = [&](const std::vector<JudgedQuery>& queries) {
    std::vector<detail::Phase2Example<Scalar>> out;
    for (const auto& q : queries) {
      if (q.relevant.empty()) throw Error("judged query without relevant documents");
      out.push_back({tokenizer.tokenize_query(q.text), q.relevant.front(), q.relevant});
    }
    return out;
  };
  const auto train_ex = make_examples(train_queries);
  const auto eval_ex = make_examples(eval_queries);

  // Eval negatives are fixed once so eval losses are comparable across steps.
  Rng eval_rng(derive_seed(cfg.seed, "phase2-eval-negatives"));
  std::vector<std::vector<DocId>> eval_negs;
  eval_negs.reserve(eval_ex.size());
  for (const auto& ex : eval_ex) {
    eval_negs.push_back(
        detail::sample_negatives(eval_rng, cfg.negatives_per_query, n_docs, ex.relevant));
  }

  DualEncoder<Scalar> dual = std::move(init);
  const auto eval_loss = [&](const DualEncoder<Scalar>& de) {
    Scalar sum = Scalar(0);
    for (std::size_t i = 0; i < eval_ex.size(); ++i) {
      sum += detail::phase2_example_loss<Scalar>(eval_ex[i], eval_negs[i], doc_tokens, de,
                                                 Scalar(1), nullptr, nullptr);
    }
    return sum / static_cast<Scalar>(eval_ex.size());
  };

  Phase2Checkpoint<Scalar> best{dual, 0, eval_loss(dual)};
  detail::check_finite(best.eval_loss, 0, "eval");
  Scalar last_eval = best.eval_loss;

  if (metrics_log != nullptr) {
    *metrics_log << "step\ttrain_loss\teval_loss\n";
  }

  Rng rng(derive_seed(cfg.seed, "phase2"));
  AdamState<Scalar> adam_state;
  const auto batch =
      static_cast<std::size_t>(std::min<int>(cfg.batch_size, static_cast<int>(train_ex.size())));

  std::vector<std::size_t> order(train_ex.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t cursor = order.size();  // force initial shuffle

  for (long step = 0; step < cfg.max_steps_phase2; ++step) {
    if (cursor + batch > order.size()) {
      rng.shuffle(order);
      cursor = 0;
    }

    auto query_grad = EncoderGrad<Scalar>::zeros_like(dual.query_params);
    auto doc_grad = EncoderGrad<Scalar>::zeros_like(dual.doc_params);
    const Scalar inv_b = Scalar(1) / static_cast<Scalar>(batch);
    Scalar loss_sum = Scalar(0);
    for (std::size_t i = 0; i < batch; ++i) {
      const auto& ex = train_ex[order[cursor + i]];
      const std::vector<DocId> negs =
          detail::sample_negatives(rng, cfg.negatives_per_query, n_docs, ex.relevant);
      loss_sum += detail::phase2_example_loss<Scalar>(ex, negs, doc_tokens, dual, inv_b,
                                                      &query_grad, &doc_grad);
    }
    cursor += batch;
    const Scalar train_loss = loss_sum / static_cast<Scalar>(batch);
    detail::check_finite(train_loss, step, "train");

    auto params = param_refs(dual.query_params);
    for (auto& ref : param_refs(dual.doc_params)) params.push_back(ref);
    auto grads = grad_refs(query_grad);
    for (auto& ref : grad_refs(doc_grad)) grads.push_back(ref);
    adam_step<Scalar>(std::move(params), grads, adam_state,
                      cfg.adam(scheduled_lr(cfg, step, cfg.max_steps_phase2)));

    if ((step + 1) % cfg.eval_every_steps == 0) {
      last_eval = eval_loss(dual);
      detail::check_finite(last_eval, step + 1, "eval");
      if (last_eval < best.eval_loss) {
        best = {dual, step + 1, last_eval};
      }
    }
    if (metrics_log != nullptr) {
      char line[96];
      std::snprintf(line, sizeof(line), "%ld\t%.6f\t%.6f\n", step + 1,
                    static_cast<double>(train_loss), static_cast<double>(last_eval));
      *metrics_log << line;
    }
  }

  if (cfg.max_steps_phase2 > 0 && cfg.max_steps_phase2 % cfg.eval_every_steps != 0) {
    const Scalar final_eval = eval_loss(dual);
    detail::check_finite(final_eval, cfg.max_steps_phase2, "eval");
    if (final_eval < best.eval_loss) {
      best = {dual, cfg.max_steps_phase2, final_eval};
    }
  }
  return best;
}

template <typename Scalar>
struct SimStats {
  Scalar mean_positive = Scalar(0);  // cosine
  Scalar mean_negative = Scalar(0);
  Scalar mean_positive_dot = Scalar(0);
  Scalar mean_negative_dot = Scalar(0);
};

// Mean anchor/positive and anchor/negative similarity over every listed
// pair, all through one shared encoder. Cosine is the primary measure
// (ranking geometry); raw dot products are reported alongside.
template <typename Scalar>
SimStats<Scalar> similarity_stats(const EncoderParams<Scalar>& params, const Tokenizer& tokenizer,
                                  const std::vector<TripletSample>& samples) {
  SimStats<Scalar> stats;
  std::size_t pos_n = 0, neg_n = 0;
  for (const auto& s : samples) {
    const auto anchor_ids = tokenizer.tokenize_query(s.anchor);
    const VecX<Scalar> a = encode(params, std::span<const int>(anchor_ids));
    for (const auto& p : s.positives) {
      const auto ids = tokenizer.tokenize_query(p);
      const VecX<Scalar> e = encode(params, std::span<const int>(ids));
      stats.mean_positive += cosine(a, e);
      stats.mean_positive_dot += a.dot(e);
      ++pos_n;
    }
    for (const auto& n : s.negatives) {
      const auto ids = tokenizer.tokenize_query(n);
      const VecX<Scalar> e = encode(params, std::span<const int>(ids));
      stats.mean_negative += cosine(a, e);
      stats.mean_negative_dot += a.dot(e);
      ++neg_n;
    }
  }
  if (pos_n == 0 || neg_n == 0) throw Error("similarity_stats needs non-empty samples");
  stats.mean_positive /= static_cast<Scalar>(pos_n);
  stats.mean_positive_dot /= static_cast<Scalar>(pos_n);
  stats.mean_negative /= static_cast<Scalar>(neg_n);
  stats.mean_negative_dot /= static_cast<Scalar>(neg_n);
  return stats;
}

}  // namespace setret
