#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "retarget/env.hpp"
#include "retarget/metrics.hpp"
#include "retarget/rescale.hpp"

namespace retarget::optimize {

enum class Method {
  kRtgGrid,    // 6 gains + 2 offset, 4 inequality constraints
  kRtgSingle,  // 2 gains + 2 offset, 2 binding inequality constraints
  kOneToOne,   // 2 offset, unconstrained
};

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct SearchConfig {
  std::uint64_t rng_seed = 0;
  int restarts = 16;
  int evaluations_per_restart = 20000;
  rescale::GainBounds gain_bounds{};
  rescale::AlphaRange alpha{};
  double tol = 0.01;
  metrics::Weights weights{};

  void validate() const;
};

struct WarmStart {
  rescale::GainSet gains;
  metrics::Placement phi;
};

struct RegistrationResult {
  Method method = Method::kOneToOne;
  rescale::GainSet best_gains;  // identity for ONE_TO_ONE
  metrics::Placement best_phi;
  metrics::MetricReport report;
  double objective = 0.0;
  bool feasible = false;
  std::int64_t evaluations = 0;
  std::uint64_t seed = 0;
};

std::string result_to_json(const RegistrationResult& r);
RegistrationResult result_from_json(const std::string& text);

/// Maximizes the weighted objective over the method's variables with a
/// multistart stochastic archive search. Gain bounds act as box bounds;
/// ratio constraints are handled by light repair plus feasibility dominance,
/// so the returned solution is always strictly feasible. Deterministic for a
/// given (inputs, seed, config).
RegistrationResult register_spaces(const env::Environment& V,
                                   const env::Environment& P, Method method,
                                   const SearchConfig& cfg,
                                   std::optional<WarmStart> warm = std::nullopt);

/// Runs ONE_TO_ONE, seeds RTG_SINGLE with its optimum, then seeds RTG_GRID
/// with the replicated RTG_SINGLE optimum. Objectives are non-decreasing in
/// that order.
std::array<RegistrationResult, 3> warm_start_chain(const env::Environment& V,
                                                  const env::Environment& P,
                                                  const SearchConfig& cfg);

}  // namespace retarget::optimize
