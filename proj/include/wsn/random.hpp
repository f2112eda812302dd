#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wsn {

/// Seeded stream shared by deployment and election within one run.
///
/// std::mt19937_64 is fully specified by the standard, so its output is
/// identical on every conforming platform. Standard distributions are not,
/// hence uniform() maps the top 53 bits to [0, 1) by hand.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64+uniform53/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wsn
