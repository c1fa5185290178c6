#include "lqrl/random.hpp"

namespace lqrl {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, StreamId id) {
  const auto s = static_cast<std::uint64_t>(id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, StreamId id) : engine_(seeded(seed, id)) {}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

Vec RandomStream::normal(Eigen::Index dim) {
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal_(engine_);
  return v;
}

Vec RandomStream::sphere(Eigen::Index dim, double radius) {
  Vec v = normal(dim);
  double norm = v.norm();
  while (norm == 0.0) {
    v = normal(dim);
    norm = v.norm();
  }
  return (radius / norm) * v;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

}  // namespace lqrl
