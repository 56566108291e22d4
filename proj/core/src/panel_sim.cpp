#include "rjcd/panel_sim.hpp"

#include <cmath>
#include <numeric>

#include "rjcd/error.hpp"

namespace rjcd {

void PanelConfig::validate() const {
  if (assessors == 0) throw InvalidInput("panel needs at least one assessor");
  if (items == 0) throw InvalidInput("panel needs at least one item");
  if (!(p_unanimous >= 0.0 && p_unanimous <= 1.0)) {
    throw InvalidInput("p_unanimous must lie in [0, 1]");
  }
  double total = 0.0;
  for (double w : label_weights) {
    if (!(w >= 0.0)) throw InvalidInput("label weights must be non-negative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidInput("label weights must sum to 1");
}

double PanelRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t PanelRng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

JudgmentMatrix simulate_panel(const PanelConfig& cfg, const std::string& query_id) {
  cfg.validate();
  PanelRng rng(cfg.seed);
  std::vector<std::vector<Label>> rows(cfg.items, std::vector<Label>(cfg.assessors));
  for (auto& row : rows) {
    if (rng.uniform() < cfg.p_unanimous) {
      const Label label = kAllLabels[rng.categorical(cfg.label_weights)];
      std::fill(row.begin(), row.end(), label);
    } else {
      for (auto& cell : row) cell = kAllLabels[rng.categorical(cfg.label_weights)];
    }
  }
  return JudgmentMatrix(query_id, {}, std::move(rows));
}

std::vector<SweepRow> sweep(std::span<const PanelConfig> configs) {
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const auto& cfg : configs) {
    const RjcdReport report = rjcd(simulate_panel(cfg));
    rows.push_back({cfg.p_unanimous, cfg.seed, report.rho, report.agreement_number,
                    report.judgment_number});
  }
  return rows;
}

}  // namespace rjcd
