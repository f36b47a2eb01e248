#include "retarget/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <json.hpp>

#include "retarget/errors.hpp"

namespace retarget::optimize {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kRtgGrid: return "rtg_grid";
    case Method::kRtgSingle: return "rtg_single";
    case Method::kOneToOne: return "one_to_one";
  }
  return "one_to_one";
}

Method method_from_string(std::string_view s) {
  if (s == "rtg_grid") return Method::kRtgGrid;
  if (s == "rtg_single") return Method::kRtgSingle;
  if (s == "one_to_one") return Method::kOneToOne;
  throw ValidationError("unknown method '" + std::string(s) + "'");
}

void SearchConfig::validate() const {
  if (restarts <= 0 || evaluations_per_restart <= 0)
    throw ValidationError("restarts and evaluation budget must be positive");
  if (!(gain_bounds.lo < gain_bounds.hi))
    throw ValidationError("gain bounds out of order");
  if (!(alpha.lo <= 1.0 && 1.0 <= alpha.hi))
    throw ValidationError("alpha range must bracket 1");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");
  weights.validate();
}

namespace {

int dimension(Method m) {
  switch (m) {
    case Method::kRtgGrid: return 8;
    case Method::kRtgSingle: return 4;
    case Method::kOneToOne: return 2;
  }
  return 2;
}

rescale::GainSet decode_gains(Method m, const std::vector<double>& x) {
  switch (m) {
    case Method::kRtgGrid:
      return rescale::GainSet{{x[0], x[1], x[2]}, {x[3], x[4], x[5]}};
    case Method::kRtgSingle:
      return rescale::GainSet::uniform(x[0], x[1]);
    case Method::kOneToOne:
      return rescale::GainSet::identity();
  }
  return rescale::GainSet::identity();
}

metrics::Placement decode_phi(const std::vector<double>& x) {
  return {x[x.size() - 2], x[x.size() - 1]};
}

// Attempts to pull a mildly ratio-infeasible gain set back inside the alpha
// range by scaling one axis uniformly. Returns false when the violation
// exceeds the repair band or no in-box scale exists.
bool repair_gains(rescale::GainSet& g, const rescale::AlphaRange& alpha,
                  const rescale::GainBounds& bounds) {
  constexpr double kRepairBand = 1.05;
  double r1 = g.min_gx() / g.max_gy();
  double r2 = g.max_gx() / g.min_gy();
  double worst = std::max({alpha.lo / r1, r2 / alpha.hi, 1.0});
  if (worst == 1.0) return true;  // already feasible on ratios
  if (worst > kRepairBand) return false;

  // Scale factors keeping both ratios inside [lo, hi].
  auto try_axis = [&](std::array<double, 3>& axis, double s_lo, double s_hi,
                      bool scales_down_ratio) {
    double axis_min = *std::min_element(axis.begin(), axis.end());
    double axis_max = *std::max_element(axis.begin(), axis.end());
    double box_lo = bounds.lo / axis_min;
    double box_hi = bounds.hi / axis_max;
    double lo = std::max(s_lo, box_lo);
    double hi = std::min(s_hi, box_hi);
    if (lo > hi) return false;
    double s = std::clamp(1.0, lo, hi);
    (void)scales_down_ratio;
    for (double& v : axis) v *= s;
    return true;
  };

  // Scaling gy by s turns the ratios into r1/s and r2/s.
  if (try_axis(g.gy, r2 / alpha.hi, r1 / alpha.lo, true)) return true;
  // Scaling gx by u turns them into u*r1 and u*r2.
  if (try_axis(g.gx, alpha.lo / r1, alpha.hi / r2, false)) return true;
  return false;
}

struct Candidate {
  std::vector<double> x;
  rescale::GainSet gains;
  metrics::Placement phi;
  metrics::MetricReport report;
  double score = -1e300;
  bool feasible = false;
  double gain_dev = 0.0;
  double phi_norm = 0.0;
};

// Prefer higher score; on exact ties prefer gentler redirection.
bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.gain_dev != b.gain_dev) return a.gain_dev < b.gain_dev;
  return a.phi_norm < b.phi_norm;
}

struct SearchSpace {
  std::vector<double> lo, hi;  // per-dimension box
};

SearchSpace make_space(Method m, const env::Environment& V,
                       const env::Environment& P, const SearchConfig& cfg) {
  SearchSpace sp;
  int d = dimension(m);
  sp.lo.assign(d, 0.0);
  sp.hi.assign(d, 0.0);
  int gains_dims = d - 2;
  for (int i = 0; i < gains_dims; ++i) {
    sp.lo[i] = cfg.gain_bounds.lo;
    sp.hi[i] = cfg.gain_bounds.hi;
  }

  // Offset bounds: an envelope of every placement where the translated
  // virtual footprint can still touch the rescaled physical footprint at any
  // in-box gains.
  geom::Rect vb = V.footprint().bounding_box();
  geom::Rect pb = P.footprint().bounding_box();
  geom::Point anchor{P.main_object().rect.x_min, P.main_object().rect.y_min};
  double gmax = cfg.gain_bounds.hi;
  double px_lo = anchor.x - gmax * (anchor.x - pb.x_min);
  double px_hi = anchor.x + gmax * (pb.x_max - anchor.x);
  double py_lo = anchor.y - gmax * (anchor.y - pb.y_min);
  double py_hi = anchor.y + gmax * (pb.y_max - anchor.y);
  sp.lo[gains_dims] = px_lo - vb.x_max;
  sp.hi[gains_dims] = px_hi - vb.x_min;
  sp.lo[gains_dims + 1] = py_lo - vb.y_max;
  sp.hi[gains_dims + 1] = py_hi - vb.y_min;
  return sp;
}

class Fitness {
 public:
  Fitness(const env::Environment& V, const env::Environment& P, Method method,
          const SearchConfig& cfg)
      : evaluator_(V, P, cfg.weights, cfg.tol),
        method_(method),
        alpha_(cfg.alpha),
        bounds_(cfg.gain_bounds) {}

  // Evaluates (and possibly repairs) a candidate; x is updated in place so
  // the archive keeps the repaired coordinates. Every candidate counts
  // against the budget, feasible or not.
  Candidate evaluate(std::vector<double> x, std::int64_t& evals) const {
    ++evals;
    Candidate c;
    c.gains = decode_gains(method_, x);
    if (method_ != Method::kOneToOne) {
      bool ok = repair_gains(c.gains, alpha_, bounds_);
      rescale::FeasibilityReport rep =
          rescale::check_constraints(c.gains, alpha_, bounds_);
      if (!ok || !rep.feasible) {
        // Dominated: ranked strictly below every feasible candidate, less
        // violation first.
        c.x = std::move(x);
        c.phi = decode_phi(c.x);
        c.score = -1.0 - rep.total_violation();
        c.feasible = false;
        return c;
      }
      // Write the repaired gains back.
      if (method_ == Method::kRtgGrid) {
        for (int i = 0; i < 3; ++i) x[i] = c.gains.gx[i];
        for (int i = 0; i < 3; ++i) x[3 + i] = c.gains.gy[i];
      } else {
        x[0] = c.gains.gx[0];
        x[1] = c.gains.gy[0];
      }
    }
    c.x = std::move(x);
    c.phi = decode_phi(c.x);
    metrics::ObjectiveResult obj = evaluator_.evaluate(c.gains, c.phi);
    c.report = obj.report;
    c.score = obj.value;
    c.feasible = true;
    c.gain_dev = c.gains.max_deviation();
    c.phi_norm = std::hypot(c.phi.x, c.phi.y);
    return c;
  }

 private:
  metrics::ObjectiveEvaluator evaluator_;
  Method method_;
  rescale::AlphaRange alpha_;
  rescale::GainBounds bounds_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Structured starting candidates: identity gains at zero offset and at
// placements aligning the main-object corners/centers, plus the warm start.
std::vector<std::vector<double>> seed_candidates(
    Method m, const env::Environment& V, const env::Environment& P,
    const std::optional<WarmStart>& warm, const SearchSpace& sp) {
  std::vector<std::vector<double>> out;
  const geom::Rect& vm = V.main_object().rect;
  const geom::Rect& pm = P.main_object().rect;
  std::vector<metrics::Placement> phis = {
      {0.0, 0.0},
      {pm.x_min - vm.x_min, pm.y_min - vm.y_min},
      {pm.x_max - vm.x_max, pm.y_max - vm.y_max},
      {pm.x_min - vm.x_min, pm.y_max - vm.y_max},
      {pm.x_max - vm.x_max, pm.y_min - vm.y_min},
      {pm.center().x - vm.center().x, pm.center().y - vm.center().y},
  };

  int d = dimension(m);
  for (const metrics::Placement& phi : phis) {
    std::vector<double> x(d, 1.0);
    x[d - 2] = phi.x;
    x[d - 1] = phi.y;
    out.push_back(std::move(x));
  }
  if (warm) {
    std::vector<double> x(d, 1.0);
    if (m == Method::kRtgGrid) {
      for (int i = 0; i < 3; ++i) x[i] = warm->gains.gx[i];
      for (int i = 0; i < 3; ++i) x[3 + i] = warm->gains.gy[i];
    } else if (m == Method::kRtgSingle) {
      x[0] = warm->gains.gx[0];
      x[1] = warm->gains.gy[0];
    }
    x[d - 2] = warm->phi.x;
    x[d - 1] = warm->phi.y;
    out.push_back(std::move(x));
  }
  for (std::vector<double>& x : out)
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x[i], sp.lo[i], sp.hi[i]);
  return out;
}

}  // namespace

RegistrationResult register_spaces(const env::Environment& V,
                                   const env::Environment& P, Method method,
                                   const SearchConfig& cfg,
                                   std::optional<WarmStart> warm) {
  cfg.validate();
  Fitness fitness(V, P, method, cfg);
  SearchSpace sp = make_space(method, V, P, cfg);
  const int d = dimension(method);

  // Archive search in the ACO-for-continuous-domains style: rank-weighted
  // Gaussian kernels around archive members, per dimension.
  const int archive_size = 30;
  const int ants = 48;
  const double locality = 0.15;
  const double zeta = 0.85;

  std::vector<double> rank_weight(archive_size);
  {
    double q = locality * archive_size;
    double norm = 0.0;
    for (int r = 0; r < archive_size; ++r) {
      rank_weight[r] = std::exp(-0.5 * (r * r) / (q * q));
      norm += rank_weight[r];
    }
    for (double& w : rank_weight) w /= norm;
    for (int r = 1; r < archive_size; ++r)
      rank_weight[r] += rank_weight[r - 1];  // cumulative
  }

  std::vector<std::vector<double>> seeds =
      seed_candidates(method, V, P, warm, sp);

  std::int64_t evals = 0;
  Candidate best;
  bool have_best = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(mix_seed(cfg.rng_seed, restart));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::int64_t restart_evals = 0;
    auto spent = [&]() { return restart_evals; };

    std::vector<Candidate> archive;
    for (const std::vector<double>& s : seeds) {
      if (spent() >= cfg.evaluations_per_restart) break;
      archive.push_back(fitness.evaluate(s, restart_evals));
    }
    while (static_cast<int>(archive.size()) < archive_size &&
           spent() < cfg.evaluations_per_restart) {
      std::vector<double> x(d);
      for (int i = 0; i < d; ++i)
        x[i] = sp.lo[i] + (sp.hi[i] - sp.lo[i]) * uniform(rng);
      archive.push_back(fitness.evaluate(std::move(x), restart_evals));
    }
    std::stable_sort(archive.begin(), archive.end(), better);

    while (spent() < cfg.evaluations_per_restart) {
      int batch = static_cast<int>(std::min<std::int64_t>(
          ants, cfg.evaluations_per_restart - spent()));
      std::vector<Candidate> brood;
      brood.reserve(batch);
      for (int a = 0; a < batch; ++a) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) {
          double u = uniform(rng);
          int guide = static_cast<int>(
              std::lower_bound(rank_weight.begin(), rank_weight.end(), u) -
              rank_weight.begin());
          guide = std::min<int>(guide, archive.size() - 1);
          double center = archive[guide].x[i];
          double spread = 0.0;
          for (const Candidate& c : archive)
            spread += std::abs(c.x[i] - center);
          spread = zeta * spread / std::max<std::size_t>(archive.size() - 1, 1);
          // A floor keeps exploration alive once the archive collapses.
          spread = std::max(spread, 1e-4 * (sp.hi[i] - sp.lo[i]));
          x[i] = std::clamp(center + spread * normal(rng), sp.lo[i], sp.hi[i]);
        }
        brood.push_back(fitness.evaluate(std::move(x), restart_evals));
      }
      archive.insert(archive.end(), std::make_move_iterator(brood.begin()),
                     std::make_move_iterator(brood.end()));
      std::stable_sort(archive.begin(), archive.end(), better);
      archive.resize(std::min<std::size_t>(archive.size(), archive_size));
    }

    evals += restart_evals;
    if (!archive.empty() &&
        (!have_best || better(archive.front(), best))) {
      best = archive.front();
      have_best = true;
    }
  }

  if (!have_best || !best.feasible)
    throw ValidationError(
        "no feasible candidate found (identity seeds should prevent this)");

  RegistrationResult result;
  result.method = method;
  result.best_gains = best.gains;
  result.best_phi = best.phi;
  result.report = best.report;
  result.objective = best.score;
  result.feasible = best.feasible;
  result.evaluations = evals;
  result.seed = cfg.rng_seed;
  return result;
}

std::array<RegistrationResult, 3> warm_start_chain(const env::Environment& V,
                                                  const env::Environment& P,
                                                  const SearchConfig& cfg) {
  std::array<RegistrationResult, 3> results;
  results[0] = register_spaces(V, P, Method::kOneToOne, cfg);
  results[1] = register_spaces(
      V, P, Method::kRtgSingle, cfg,
      WarmStart{rescale::GainSet::identity(), results[0].best_phi});
  results[2] = register_spaces(
      V, P, Method::kRtgGrid, cfg,
      WarmStart{results[1].best_gains, results[1].best_phi});
  return results;
}

std::string result_to_json(const RegistrationResult& r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["best_gains"] = {{"gx", r.best_gains.gx}, {"gy", r.best_gains.gy}};
  j["best_phi"] = {{"x", r.best_phi.x}, {"y", r.best_phi.y}};
  j["report"] = json::parse(metrics::report_to_json(r.report));
  j["objective"] = r.objective;
  j["feasible"] = r.feasible;
  j["evaluations"] = r.evaluations;
  j["seed"] = r.seed;
  return j.dump(2);
}

RegistrationResult result_from_json(const std::string& text) {
  json j = json::parse(text);
  RegistrationResult r;
  r.method = method_from_string(j.at("method").get<std::string>());
  auto gx = j.at("best_gains").at("gx");
  auto gy = j.at("best_gains").at("gy");
  for (int i = 0; i < 3; ++i) {
    r.best_gains.gx[i] = gx.at(i).get<double>();
    r.best_gains.gy[i] = gy.at(i).get<double>();
  }
  r.best_phi.x = j.at("best_phi").at("x").get<double>();
  r.best_phi.y = j.at("best_phi").at("y").get<double>();
  r.report = metrics::report_from_json(j.at("report").dump());
  r.objective = j.at("objective").get<double>();
  r.feasible = j.at("feasible").get<bool>();
  r.evaluations = j.at("evaluations").get<std::int64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

}  // namespace retarget::optimize
