#pragma once

#include <cstdint>
#include <vector>

#include "aegan/config.hpp"
#include "aegan/models.hpp"

namespace aegan {

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::adaptive_moment;
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double momentum = 0.9;
  double epsilon = 1e-8;
};

/// First-order optimizer over one ParameterSet. `step` descends along the
/// given gradient; callers maximizing an objective pass its negation.
///
/// State slots: none for sgd, [velocity] for momentum, [first moment,
/// second moment] for adaptive_moment.
class Optimizer {
 public:
  Optimizer(OptimizerSettings settings, const ParameterSet& like);

  void step(ParameterSet& params, const ParameterSet& grads);

  const OptimizerSettings& settings() const noexcept { return settings_; }
  std::uint64_t steps_taken() const noexcept { return steps_; }
  const std::vector<ParameterSet>& slots() const noexcept { return slots_; }

  /// Restores serialized state; slot layout must match.
  void restore(std::uint64_t steps_taken, std::vector<ParameterSet> slots);

 private:
  OptimizerSettings settings_;
  std::uint64_t steps_ = 0;
  std::vector<ParameterSet> slots_;
};

}  // namespace aegan
