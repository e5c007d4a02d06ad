#include "aegan/optim.hpp"

#include <cmath>

#include "aegan/errors.hpp"

namespace aegan {

namespace {

std::size_t slot_count(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return 0;
    case OptimizerKind::momentum: return 1;
    case OptimizerKind::adaptive_moment: return 2;
  }
  return 0;
}

bool same_layout(const ParameterSet& a, const ParameterSet& b) {
  if (a.tensors.size() != b.tensors.size()) return false;
  for (std::size_t i = 0; i < a.tensors.size(); ++i) {
    if (a.tensors[i].value.shape() != b.tensors[i].value.shape()) return false;
  }
  return true;
}

}  // namespace

Optimizer::Optimizer(OptimizerSettings settings, const ParameterSet& like) : settings_(settings) {
  if (!(settings_.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  slots_.assign(slot_count(settings_.kind), like.zeros_like());
}

void Optimizer::step(ParameterSet& params, const ParameterSet& grads) {
  if (!same_layout(params, grads)) throw ShapeError("gradient layout does not match parameters");
  ++steps_;
  const double lr = settings_.learning_rate;
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    auto p = params.tensors[t].value.values();
    const auto g = grads.tensors[t].value.values();
    switch (settings_.kind) {
      case OptimizerKind::sgd:
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
        break;
      case OptimizerKind::momentum: {
        auto v = slots_[0].tensors[t].value.values();
        for (std::size_t i = 0; i < p.size(); ++i) {
          v[i] = settings_.momentum * v[i] + g[i];
          p[i] -= lr * v[i];
        }
        break;
      }
      case OptimizerKind::adaptive_moment: {
        auto m = slots_[0].tensors[t].value.values();
        auto v = slots_[1].tensors[t].value.values();
        const double b1 = settings_.beta1;
        const double b2 = settings_.beta2;
        const double k = static_cast<double>(steps_);
        const double c1 = 1.0 - std::pow(b1, k);
        const double c2 = 1.0 - std::pow(b2, k);
        for (std::size_t i = 0; i < p.size(); ++i) {
          m[i] = b1 * m[i] + (1.0 - b1) * g[i];
          v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
          p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + settings_.epsilon);
        }
        break;
      }
    }
  }
}

void Optimizer::restore(std::uint64_t steps_taken, std::vector<ParameterSet> slots) {
  if (slots.size() != slots_.size()) throw ShapeError("optimizer slot count mismatch");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!same_layout(slots[i], slots_[i])) throw ShapeError("optimizer slot layout mismatch");
  }
  steps_ = steps_taken;
  slots_ = std::move(slots);
}

}  // namespace aegan
