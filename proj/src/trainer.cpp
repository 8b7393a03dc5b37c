#include "setret/trainer.hpp"

namespace setret {

std::string_view loss_mode_label(LossMode mode) {
  switch (mode) {
    case LossMode::inversed_contrastive:
      return "inversed_contrastive";
    case LossMode::triplet:
      return "triplet";
    case LossMode::contrastive:
      return "contrastive";
  }
  throw Error("invalid LossMode");
}

LossMode loss_mode_from_label(std::string_view label) {
  if (label == "inversed_contrastive") return LossMode::inversed_contrastive;
  if (label == "triplet") return LossMode::triplet;
  if (label == "contrastive") return LossMode::contrastive;
  throw Error("unknown loss mode: " + std::string(label));
}

}  // namespace setret
