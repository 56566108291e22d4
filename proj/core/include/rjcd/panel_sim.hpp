#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rjcd/judgment.hpp"

namespace rjcd {

// Synthetic assessor panel: each item is unanimous with probability
// p_unanimous (one label drawn and copied to all assessors), otherwise every
// assessor draws independently from label_weights (order R, P, I, N).
struct PanelConfig {
  std::size_t assessors = 5;
  std::size_t items = 50;
  double p_unanimous = 0.0;
  std::array<double, kLabelCount> label_weights{0.25, 0.25, 0.25, 0.25};
  std::uint64_t seed = 0;

  // Throws InvalidInput on h == 0, items == 0, p outside [0, 1], negative
  // weights or weights not summing to 1 within 1e-9.
  void validate() const;
};

// std::mt19937_64 (whose output sequence the standard fixes) with hand-written
// conversions to uniform and categorical draws, so a seed gives the same
// stream on every platform and standard library.
class PanelRng {
 public:
  explicit PanelRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Index drawn with probability proportional to weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

JudgmentMatrix simulate_panel(const PanelConfig& cfg, const std::string& query_id = "sim");

struct SweepRow {
  double p_unanimous = 0.0;
  std::uint64_t seed = 0;
  double rho = 0.0;
  std::size_t agreement_number = 0;
  std::size_t judgment_number = 0;
};

std::vector<SweepRow> sweep(std::span<const PanelConfig> configs);

}  // namespace rjcd
