#pragma once

#include <cstdint>
#include <random>

#include "weyl/weyl.hpp"

namespace weyl::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Event event(double t_max = 5.0) { return {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(0, t_max)}; }

 private:
  std::mt19937_64 gen_;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace weyl::test
