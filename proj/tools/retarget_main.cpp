// Command-line front end: registers virtual floorplans onto physical ones,
// scores candidates, reports complexity measures, simulates redirected walks,
// and renders SVG overlays.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "retarget/complexity.hpp"
#include "retarget/env.hpp"
#include "retarget/errors.hpp"
#include "retarget/metrics.hpp"
#include "retarget/optimize.hpp"
#include "retarget/render.hpp"
#include "retarget/rescale.hpp"

namespace {

using nlohmann::json;
using namespace retarget;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

struct RunConfig {
  metrics::Weights weights{};
  double tol = 0.01;
  rescale::AlphaRange alpha{};
  rescale::GainBounds gain_bounds{};
  double l_s = 0.25;
  std::uint64_t seed = 0;
  int restarts = 16;
  int evaluations_per_restart = 20000;
};

// Flat-key config file; missing keys keep their defaults.
RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file: " + std::string(e.what()));
  }
  if (j.contains("w_hor")) cfg.weights.w_hor = {j["w_hor"].get<double>()};
  if (j.contains("w_ver")) cfg.weights.w_ver = {j["w_ver"].get<double>()};
  if (j.contains("w_size")) cfg.weights.w_size = j["w_size"].get<double>();
  if (j.contains("w_sem")) cfg.weights.w_sem = j["w_sem"].get<double>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("alpha_lo")) cfg.alpha.lo = j["alpha_lo"].get<double>();
  if (j.contains("alpha_hi")) cfg.alpha.hi = j["alpha_hi"].get<double>();
  if (j.contains("gain_lo")) cfg.gain_bounds.lo = j["gain_lo"].get<double>();
  if (j.contains("gain_hi")) cfg.gain_bounds.hi = j["gain_hi"].get<double>();
  if (j.contains("l_s")) cfg.l_s = j["l_s"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
  if (j.contains("evaluations_per_restart"))
    cfg.evaluations_per_restart = j["evaluations_per_restart"].get<int>();
  return cfg;
}

std::uint64_t env_seed_fallback() {
  if (const char* s = std::getenv("RETARGET_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      throw ValidationError("RETARGET_SEED is not an integer");
    }
  }
  return 0;
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot write '" + out_path + "'");
  out << text;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ValidationError("expected a number, got '" + item + "'");
    }
  }
  return out;
}

optimize::SearchConfig search_config(const RunConfig& run) {
  optimize::SearchConfig cfg;
  cfg.rng_seed = run.seed;
  cfg.restarts = run.restarts;
  cfg.evaluations_per_restart = run.evaluations_per_restart;
  cfg.gain_bounds = run.gain_bounds;
  cfg.alpha = run.alpha;
  cfg.tol = run.tol;
  cfg.weights = run.weights;
  return cfg;
}

int cmd_register(const std::string& virtual_path,
                 const std::string& physical_path, const std::string& method,
                 const RunConfig& run, const std::string& out_path,
                 const std::string& svg_path) {
  env::Environment V = env::load_environment_file(virtual_path);
  env::Environment P = env::load_environment_file(physical_path);
  optimize::SearchConfig cfg = search_config(run);

  std::vector<optimize::RegistrationResult> results;
  if (method == "all") {
    auto chain = optimize::warm_start_chain(V, P, cfg);
    results.assign(chain.begin(), chain.end());
  } else {
    optimize::Method m;
    if (method == "grid") m = optimize::Method::kRtgGrid;
    else if (method == "single") m = optimize::Method::kRtgSingle;
    else if (method == "1to1") m = optimize::Method::kOneToOne;
    else throw ValidationError("unknown method '" + method + "'");
    results.push_back(optimize::register_spaces(V, P, m, cfg));
  }

  for (const auto& r : results) {
    std::cerr << optimize::to_string(r.method) << ": objective " << r.objective
              << "  psi_hor " << r.report.psi_hor << "  psi_ver "
              << r.report.psi_ver << "  psi_size " << r.report.psi_size
              << "  psi_sem " << r.report.psi_sem << "\n";
  }

  std::string text;
  if (results.size() == 1) {
    text = optimize::result_to_json(results[0]);
  } else {
    json j;
    j["results"] = json::array();
    for (const auto& r : results)
      j["results"].push_back(json::parse(optimize::result_to_json(r)));
    text = j.dump(2);
  }
  write_or_print(out_path, text);

  if (!svg_path.empty()) {
    const auto& shown = results.back();
    write_or_print(svg_path, render::render_registration(V, P, shown));
  }
  return kExitOk;
}

int cmd_complexity(const std::string& env_path, double c_override,
                   double grid_step, const std::string& out_path) {
  env::Environment e = env::load_environment_file(env_path);
  complexity::ComplexityKernel kernel =
      c_override > 0.0 ? complexity::constant_kernel(c_override)
                       : complexity::clearance_kernel(grid_step);
  complexity::ComplexityReport r = complexity::spatial_complexity(e, kernel);
  write_or_print(out_path, complexity::complexity_report_to_json(e.name(), r));
  return kExitOk;
}

int cmd_dissimilarity(const std::string& virtual_path,
                      const std::string& physical_path, double c_virt,
                      double c_phys, double grid_step,
                      const std::string& out_path) {
  env::Environment V = env::load_environment_file(virtual_path);
  env::Environment P = env::load_environment_file(physical_path);
  auto kernel_for = [&](double c) {
    return c > 0.0 ? complexity::constant_kernel(c)
                   : complexity::clearance_kernel(grid_step);
  };
  complexity::PairReport r = complexity::compare_environments(
      V, P, kernel_for(c_virt), kernel_for(c_phys));
  write_or_print(out_path, complexity::pair_report_to_json(r));
  return kExitOk;
}

int cmd_simulate(const std::string& env_path, const std::string& gains_csv,
                 const std::string& path_text, double step, double l_s,
                 const RunConfig& run, const std::string& out_path) {
  env::Environment e = env::load_environment_file(env_path);
  std::vector<double> g = parse_csv_doubles(gains_csv);
  rescale::GainSet gains;
  if (g.size() == 2) {
    gains = rescale::GainSet::uniform(g[0], g[1]);
  } else if (g.size() == 6) {
    gains = rescale::GainSet{{g[0], g[1], g[2]}, {g[3], g[4], g[5]}};
  } else {
    throw ValidationError("--gains expects 2 or 6 comma-separated values");
  }
  rescale::RescaleMap map =
      rescale::make_rescale_map(e, gains, run.alpha, run.gain_bounds);

  std::vector<geom::Point> path;
  std::stringstream ss(path_text);
  std::string pair;
  while (ss >> pair) {
    std::vector<double> xy = parse_csv_doubles(pair);
    if (xy.size() != 2)
      throw ValidationError("path points must be x,y pairs, got '" + pair +
                            "'");
    path.push_back({xy[0], xy[1]});
  }
  if (path.size() < 2)
    throw ValidationError("path needs at least two x,y points");

  rescale::SmoothedGainField field(map, l_s);
  auto samples = rescale::simulate_walk(field, e.footprint(), path, step);

  std::ostringstream csv;
  csv << "phys_x,phys_y,virt_x,virt_y,gx,gy\n";
  csv.precision(9);
  for (const auto& s : samples) {
    csv << s.physical.x << "," << s.physical.y << "," << s.virtual_pos.x << ","
        << s.virtual_pos.y << "," << s.gx << "," << s.gy << "\n";
  }
  write_or_print(out_path, csv.str());
  return kExitOk;
}

int cmd_render(const std::string& result_path, const std::string& virtual_path,
               const std::string& physical_path, const std::string& out_path,
               double scale) {
  env::Environment V = env::load_environment_file(virtual_path);
  env::Environment P = env::load_environment_file(physical_path);
  std::ifstream in(result_path);
  if (!in) throw ValidationError("cannot read result file '" + result_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  optimize::RegistrationResult result;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("result file: " + std::string(e.what()));
  }
  if (j.contains("results")) {
    // A warm-start chain file; render the last (best) entry.
    result = optimize::result_from_json(j["results"].back().dump());
  } else {
    result = optimize::result_from_json(text);
  }

  render::RenderStyle style;
  if (scale > 0.0) style.scale = scale;
  write_or_print(out_path, render::render_registration(V, P, result, style));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual-to-physical floorplan registration toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with flat keys");

  // register
  auto* reg = app.add_subcommand("register",
                                 "Optimize a registration between two spaces");
  std::string reg_virtual, reg_physical, reg_method = "all", reg_out, reg_svg;
  std::string reg_weights, reg_alpha;
  std::optional<std::uint64_t> reg_seed;
  std::optional<int> reg_restarts, reg_evals;
  std::optional<double> reg_tol;
  reg->add_option("--virtual", reg_virtual, "virtual environment JSON")
      ->required();
  reg->add_option("--physical", reg_physical, "physical environment JSON")
      ->required();
  reg->add_option("--method", reg_method, "grid|single|1to1|all");
  reg->add_option("--seed", reg_seed, "RNG seed");
  reg->add_option("--restarts", reg_restarts, "search restarts");
  reg->add_option("--evals", reg_evals, "evaluations per restart");
  reg->add_option("--tol", reg_tol, "edge-match tolerance in meters");
  reg->add_option("--weights", reg_weights, "w_hor,w_ver,w_size,w_sem");
  reg->add_option("--alpha", reg_alpha, "alpha_lo,alpha_hi ratio bounds");
  reg->add_option("--out", reg_out, "result JSON path (default: stdout)");
  reg->add_option("--svg", reg_svg, "also render an SVG overlay here");

  // complexity
  auto* cx = app.add_subcommand("complexity",
                                "Spatial complexity report for one space");
  std::string cx_env, cx_out;
  double cx_override = 0.0, cx_step = 0.2;
  bool cx_override_set = false;
  cx->add_option("--env", cx_env, "environment JSON")->required();
  cx->add_option("--c-override", cx_override,
                 "inject a published C(E) instead of the clearance kernel")
      ->each([&](const std::string&) { cx_override_set = true; });
  cx->add_option("--grid-step", cx_step, "clearance sampling step (m)");
  cx->add_option("--out", cx_out, "output path (default: stdout)");

  // dissimilarity
  auto* dis = app.add_subcommand("dissimilarity",
                                 "SD, SMD, and CR for a space pair");
  std::string dis_virtual, dis_physical, dis_out;
  double dis_cv = 0.0, dis_cp = 0.0, dis_step = 0.2;
  bool dis_cv_set = false, dis_cp_set = false;
  dis->add_option("--virtual", dis_virtual, "virtual environment JSON")
      ->required();
  dis->add_option("--physical", dis_physical, "physical environment JSON")
      ->required();
  dis->add_option("--c-virt", dis_cv, "published C(E) for the virtual space")
      ->each([&](const std::string&) { dis_cv_set = true; });
  dis->add_option("--c-phys", dis_cp, "published C(E) for the physical space")
      ->each([&](const std::string&) { dis_cp_set = true; });
  dis->add_option("--grid-step", dis_step, "clearance sampling step (m)");
  dis->add_option("--out", dis_out, "output path (default: stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate",
                                 "Integrate a walk through the gain field");
  std::string sim_env, sim_gains, sim_path, sim_out;
  double sim_step = 0.01;
  std::optional<double> sim_ls;
  sim->add_option("--env", sim_env, "physical environment JSON")->required();
  sim->add_option("--gains", sim_gains,
                  "gx,gy or gx1,gx2,gx3,gy1,gy2,gy3")
      ->required();
  sim->add_option("--path", sim_path,
                  "whitespace-separated x,y pairs")
      ->required();
  sim->add_option("--step", sim_step, "integration step (m)");
  sim->add_option("--ls", sim_ls, "smoothing half-width (m)");
  sim->add_option("--out", sim_out, "CSV path (default: stdout)");

  // render
  auto* ren = app.add_subcommand("render", "Render a result overlay as SVG");
  std::string ren_in, ren_virtual, ren_physical, ren_out;
  double ren_scale = 0.0;
  ren->add_option("--in", ren_in, "registration result JSON")->required();
  ren->add_option("--virtual", ren_virtual, "virtual environment JSON")
      ->required();
  ren->add_option("--physical", ren_physical, "physical environment JSON")
      ->required();
  ren->add_option("--out", ren_out, "SVG path (default: stdout)");
  ren->add_option("--scale", ren_scale, "pixels per meter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  try {
    RunConfig run = load_config(config_path);
    if (run.seed == 0) run.seed = env_seed_fallback();

    if (reg->parsed()) {
      if (reg_seed) run.seed = *reg_seed;
      if (reg_restarts) run.restarts = *reg_restarts;
      if (reg_evals) run.evaluations_per_restart = *reg_evals;
      if (reg_tol) run.tol = *reg_tol;
      if (!reg_weights.empty()) {
        std::vector<double> w = parse_csv_doubles(reg_weights);
        if (w.size() != 4)
          throw ValidationError("--weights expects w_hor,w_ver,w_size,w_sem");
        run.weights.w_hor = {w[0]};
        run.weights.w_ver = {w[1]};
        run.weights.w_size = w[2];
        run.weights.w_sem = w[3];
      }
      if (!reg_alpha.empty()) {
        std::vector<double> a = parse_csv_doubles(reg_alpha);
        if (a.size() != 2)
          throw ValidationError("--alpha expects alpha_lo,alpha_hi");
        run.alpha = {a[0], a[1]};
      }
      return cmd_register(reg_virtual, reg_physical, reg_method, run, reg_out,
                          reg_svg);
    }
    if (cx->parsed()) {
      if (cx_override_set && !(cx_override > 0.0))
        throw ValidationError("--c-override must be > 0");
      return cmd_complexity(cx_env, cx_override_set ? cx_override : 0.0,
                            cx_step, cx_out);
    }
    if (dis->parsed()) {
      if ((dis_cv_set && !(dis_cv > 0.0)) || (dis_cp_set && !(dis_cp > 0.0)))
        throw ValidationError("--c-virt/--c-phys must be > 0");
      return cmd_dissimilarity(dis_virtual, dis_physical,
                               dis_cv_set ? dis_cv : 0.0,
                               dis_cp_set ? dis_cp : 0.0, dis_step, dis_out);
    }
    if (sim->parsed()) {
      RunConfig run_sim = run;
      double ls = sim_ls ? *sim_ls : run_sim.l_s;
      return cmd_simulate(sim_env, sim_gains, sim_path, sim_step, ls, run_sim,
                          sim_out);
    }
    if (ren->parsed()) {
      return cmd_render(ren_in, ren_virtual, ren_physical, ren_out, ren_scale);
    }
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
