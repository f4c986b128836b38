#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace autohedge {

struct Observation {
  std::vector<double> features;
};

struct Transition {
  Observation obs;
  double action = 0.0;
  double reward = 0.0;
  Observation next_obs;
  bool done = false;
};

struct StepResult {
  double reward = 0.0;
  Observation next_obs;
  bool done = false;
};

/// Episodic environment with a scalar action in [0, 1].
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Observation reset(std::uint64_t seed) = 0;
  virtual StepResult step(double action) = 0;
  virtual std::size_t observation_size() const = 0;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

}  // namespace autohedge
