#pragma once

#include <cstdint>
#include <random>

#include "lqrl/linalg.hpp"

namespace lqrl {

// Independent sub-streams of one run seed. Each consumer owns its own stream,
// so e.g. adding process noise never shifts the stop draws.
enum class StreamId : std::uint64_t {
  kStop = 1,
  kExploration = 2,
  kRestart = 3,
  kProcessNoise = 4,
  kObservationNoise = 5,
  kInitialBelief = 6,
  kMonteCarlo = 7,
  kLemmas = 8,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamId id);

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  Vec normal(Eigen::Index dim);
  // Uniform direction scaled to `radius`.
  Vec sphere(Eigen::Index dim, double radius);
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace lqrl
