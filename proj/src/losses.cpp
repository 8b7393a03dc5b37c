#include "setret/losses.hpp"

namespace setret {

std::vector<AnchorSlots> assemble_in_batch(std::span<const SampleSlots> batch, int l) {
  if (batch.size() < 2) {
    throw BatchTooSmallError("in-batch negatives need a batch of >= 2 samples, got " +
                             std::to_string(batch.size()));
  }
  if (l < 1) throw Error("positives per anchor must be >= 1");

  std::vector<AnchorSlots> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    AnchorSlots slots;
    slots.sample = static_cast<int>(i);
    slots.anchor = batch[i].anchor;
    slots.primary_negative = batch[i].primary_negative;
    const auto own_l = std::min<std::size_t>(batch[i].positives.size(),
                                             static_cast<std::size_t>(l));
    slots.positives.assign(batch[i].positives.begin(),
                           batch[i].positives.begin() + static_cast<std::ptrdiff_t>(own_l));
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (j == i) continue;
      for (const int p : batch[j].positives) slots.inbatch_negatives.push_back(p);
      slots.inbatch_negatives.push_back(batch[j].primary_negative);
    }
    out.push_back(std::move(slots));
  }
  return out;
}

}  // namespace setret
