// varcz: dyadic-harmonic-analysis toolbox on finite doubling spaces.
//
// Subcommands mirror the library modules: space construction/validation,
// cube systems, operator evaluation, sparse families and domination,
// weight characteristics, and config-driven experiments.
//
// Exit codes: 0 all configured assertions pass, 1 assertion failure,
// 2 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "varcz/harness.hpp"
#include "varcz/martingale.hpp"
#include "varcz/operators.hpp"
#include "varcz/parallel.hpp"
#include "varcz/serialize.hpp"
#include "varcz/sparse.hpp"
#include "varcz/weights.hpp"

namespace {

using namespace varcz;

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::pair<int, int> parse_scale_range(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("scale range must be a:b");
  }
  return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
}

std::shared_ptr<const Space> load_space(const std::string& path) {
  return std::make_shared<Space>(space_from_json(load_json(path)));
}

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(j, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varcz: variational truncation experiments on doubling spaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_path;
  std::string global_config;
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")
      ->capture_default_str();
  app.add_option("--out", out_path, "output file or directory");
  app.add_option("--config", global_config, "experiment config (JSON)");

  // --- space ---
  auto* space_cmd = app.add_subcommand("space", "build and validate spaces");
  auto* space_build = space_cmd->add_subcommand("build", "construct a space");
  std::string kind = "euclidean";
  int dim = 1, side = 64;
  double spacing = 1.0;
  space_build->add_option("--kind", kind, "euclidean|heisenberg");
  space_build->add_option("--dim", dim, "dimension (euclidean)");
  space_build->add_option("--side", side, "points per side");
  space_build->add_option("--spacing", spacing, "lattice spacing");

  auto* space_check = space_cmd->add_subcommand("check", "validate a space");
  std::string space_path, check_op = "quasitriangle", radii_csv;
  double eta = 1.0;
  int samples = 10000;
  space_check->add_option("--space", space_path)->required();
  space_check->add_option("--op", check_op, "regularity|holder|quasitriangle");
  space_check->add_option("--radii", radii_csv, "comma list (regularity)");
  space_check->add_option("--eta", eta, "Holder exponent");
  space_check->add_option("--samples", samples);

  // --- cubes ---
  auto* cubes_cmd = app.add_subcommand("cubes", "dyadic cube systems");
  auto* cubes_build = cubes_cmd->add_subcommand("build", "construct a system");
  std::string scales_spec = "0:6";
  double kappa = 2.0;
  bool shifted = false;
  int alpha = 0;
  cubes_build->add_option("--space", space_path)->required();
  cubes_build->add_option("--kappa", kappa);
  cubes_build->add_option("--scales", scales_spec, "k_min:k_max");
  cubes_build->add_flag("--shifted", shifted, "shifted Euclidean grids");
  cubes_build->add_option("--alpha", alpha, "shift index to emit");

  auto* cubes_verify = cubes_cmd->add_subcommand("verify", "check the axioms");
  std::string system_path;
  cubes_verify->add_option("--space", space_path)->required();
  cubes_verify->add_option("--system", system_path)->required();

  auto* cubes_boundary =
      cubes_cmd->add_subcommand("boundary", "collar measurements");
  std::string tau_csv = "0.05,0.1,0.2";
  cubes_boundary->add_option("--space", space_path)->required();
  cubes_boundary->add_option("--system", system_path)->required();
  cubes_boundary->add_option("--tau", tau_csv, "comma list of tau values");

  // --- op ---
  auto* op_cmd = app.add_subcommand("op", "operator evaluation");
  std::string op_name = "average", kernel_name = "hilbert", t_csv = "1.0";
  std::string shape = "random";
  int at_point = 0, op_k = 1, op_kprime = 1;
  std::string mode = "averages";
  op_cmd->add_option("verb", op_name, "average|tsi|shortvar|orth")->required();
  op_cmd->add_option("--space", space_path)->required();
  op_cmd->add_option("--kernel", kernel_name);
  op_cmd->add_option("--t", t_csv, "truncation radii");
  op_cmd->add_option("--f", shape, "test function shape");
  op_cmd->add_option("--x", at_point, "evaluation point");
  op_cmd->add_option("--k", op_k, "scale");
  op_cmd->add_option("--kprime", op_kprime, "second scale (orth)");
  op_cmd->add_option("--scales", scales_spec, "k_min:k_max (shortvar)");
  op_cmd->add_option("--mode", mode, "averages|singular (shortvar)");

  // --- sparse ---
  auto* sparse_cmd = app.add_subcommand("sparse", "sparse families");
  std::string sparse_verb, functional = "var-av";
  double rr = 3.0, lambda = 0.5;
  sparse_cmd->add_option("verb", sparse_verb, "build|verify")->required();
  sparse_cmd->add_option("--space", space_path)->required();
  sparse_cmd->add_option("--system", system_path, "cube-system JSON file");
  sparse_cmd->add_option("--scales", scales_spec);
  sparse_cmd->add_option("--functional", functional, "var-av|var-tsi|jump-av");
  sparse_cmd->add_option("--r", rr);
  sparse_cmd->add_option("--lambda", lambda);
  sparse_cmd->add_option("--kernel", kernel_name);
  sparse_cmd->add_option("--f", shape);

  // --- weights ---
  auto* weights_cmd = app.add_subcommand("weights", "weight characteristics");
  auto* weights_char = weights_cmd->add_subcommand("char");
  std::string weight_spec = "power:0.5";
  double pp = 2.0;
  weights_char->add_option("--space", space_path)->required();
  weights_char->add_option("--system", system_path, "cube-system JSON file");
  weights_char->add_option("--scales", scales_spec);
  weights_char->add_option("--weight", weight_spec);
  weights_char->add_option("--p", pp);

  // --- experiment ---
  auto* exp_cmd = app.add_subcommand("experiment", "config-driven runs");
  auto* exp_run = exp_cmd->add_subcommand("run");
  std::string config_path;
  exp_run->add_option("--config", config_path, "JSON config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_thread_count(threads);

  try {
    if (space_build->parsed()) {
      const Space s = kind == "euclidean"
                          ? Space::euclidean_grid(dim, side, spacing)
                          : Space::heisenberg_grid(side, spacing);
      emit(space_to_json(s), out_path);
      return 0;
    }
    if (space_check->parsed()) {
      auto space = load_space(space_path);
      Json j;
      bool pass = true;
      if (check_op == "quasitriangle") {
        const auto rep = check_quasi_triangle(*space, samples, seed);
        j = {{"max_ratio", rep.max_ratio},
             {"violations", rep.violations},
             {"triples", rep.triples}};
        pass = rep.violations == 0;
      } else if (check_op == "holder") {
        const auto rep = check_holder_metric(*space, eta, samples, seed);
        j = {{"eta", rep.eta},
             {"constant", rep.constant},
             {"triples", rep.triples}};
        pass = std::isfinite(rep.constant);
      } else if (check_op == "regularity") {
        std::vector<double> radii = parse_doubles(radii_csv);
        if (radii.empty()) {
          for (double r = 2 * space->min_spacing();
               r <= space->diameter() / 4; r *= 2) {
            radii.push_back(r);
          }
        }
        std::vector<int> centers;
        for (int i = 0; i < space->size();
             i += std::max(1, space->size() / 64)) {
          centers.push_back(i);
        }
        const auto rep = check_regularity(*space, radii, centers);
        j = {{"min_ratio", rep.min_ratio},
             {"max_ratio", rep.max_ratio},
             {"fitted_exponent", rep.fitted_exponent}};
        pass = std::abs(rep.fitted_exponent - space->homogeneous_dimension()) <
               0.5;
      } else {
        throw ConfigError("unknown space check: " + check_op);
      }
      emit(j, out_path);
      return pass ? 0 : 1;
    }
    if (cubes_build->parsed()) {
      auto space = load_space(space_path);
      const auto [k_min, k_max] = parse_scale_range(scales_spec);
      if (shifted) {
        auto systems = build_shifted_grids(space, k_min, k_max);
        if (alpha < 0 || alpha >= static_cast<int>(systems.size())) {
          throw ConfigError("alpha outside the shift family");
        }
        emit(cube_system_to_json(systems[alpha]), out_path);
      } else {
        const CubeSystem system =
            build_christ_cubes(space, kappa, k_min, k_max, seed);
        emit(cube_system_to_json(system), out_path);
      }
      return 0;
    }
    if (cubes_verify->parsed()) {
      auto space = load_space(space_path);
      const CubeSystem system =
          cube_system_from_json(space, load_json(system_path));
      const AxiomReport rep = verify_cube_axioms(system);
      emit({{"coverage", rep.coverage},
            {"disjointness", rep.disjointness},
            {"nesting", rep.nesting},
            {"ball_sandwich", rep.ball_sandwich},
            {"witness", rep.witness},
            {"a0", system.a0()},
            {"C1", system.c1()}},
           out_path);
      return rep.pass() ? 0 : 1;
    }
    if (cubes_boundary->parsed()) {
      auto space = load_space(space_path);
      const CubeSystem system =
          cube_system_from_json(space, load_json(system_path));
      const std::vector<double> taus = parse_doubles(tau_csv);
      const BoundaryReport rep = measure_small_boundary(system, taus);
      Json rows = Json::array();
      for (const BoundaryRow& row : rep.rows) {
        rows.push_back({{"tau", row.tau}, {"ratio", row.ratio}});
      }
      emit({{"fitted_eta", rep.fitted_eta},
            {"fitted_C3", rep.fitted_c3},
            {"targets", rep.targets},
            {"rows", rows}},
           out_path);
      return 0;
    }
    if (op_cmd->parsed()) {
      auto space = load_space(space_path);
      const Kernel kernel = make_kernel(kernel_name);
      const CVec f = make_test_function(*space, shape, seed);
      Json j;
      if (op_name == "average" || op_name == "tsi") {
        Json values = Json::array();
        for (double t : parse_doubles(t_csv)) {
          const Complex v = op_name == "average"
                                ? average(*space, f, t, at_point)
                                : truncated_si(*space, kernel, f, t, at_point);
          values.push_back({{"t", t}, {"re", v.real()}, {"im", v.imag()}});
        }
        j = {{"op", op_name}, {"x", at_point}, {"values", values}};
      } else if (op_name == "shortvar") {
        const auto [k_min, k_max] = parse_scale_range(scales_spec);
        auto systems = space->kind() == SpaceKind::euclidean
                           ? build_shifted_grids(space, k_min, k_max)
                           : std::vector<CubeSystem>{};
        const CubeSystem system =
            space->kind() == SpaceKind::euclidean
                ? std::move(systems[0])
                : build_christ_cubes(space, 2.0, k_min, k_max, seed);
        const Vec s = short_variation(
            *space, system, f, op_k,
            mode == "singular" ? ShortVariationMode::singular
                               : ShortVariationMode::averages,
            &kernel);
        j = {{"op", "shortvar"},
             {"k", op_k},
             {"values", std::vector<double>(s.begin(), s.end())}};
      } else if (op_name == "orth") {
        const double norm =
            almost_orthogonality(*space, kernel, op_k, op_kprime, 2.0);
        j = {{"op", "orth"},
             {"k", op_k},
             {"kprime", op_kprime},
             {"norm", norm}};
      } else {
        throw ConfigError("unknown op verb: " + op_name);
      }
      emit(j, out_path);
      return 0;
    }
    if (sparse_cmd->parsed()) {
      auto space = load_space(space_path);
      const CubeSystem system =
          system_path.empty()
              ? build_system_for_space(space, seed)
              : cube_system_from_json(space, load_json(system_path));
      const CVec f = make_test_function(*space, shape, seed);
      const Kernel kernel = make_kernel(kernel_name);
      auto cache = std::make_shared<ProfileCache>(
          *space, f, functional == "var-tsi" ? &kernel : nullptr);
      PairFunctional pf =
          functional == "jump-av"
              ? make_jump_functional(cache, lambda)
              : make_variation_functional(cache, rr);
      const SparseFamily family =
          build_sparse_family(system, &pf, f, system.k_max(), {});
      if (sparse_verb == "build") {
        emit(sparse_family_to_json(family), out_path);
        return 0;
      }
      if (sparse_verb == "verify") {
        Vec lhs(space->size());
        for (int x = 0; x < space->size(); ++x) {
          lhs[x] = functional == "jump-av"
                       ? lambda * std::sqrt(static_cast<double>(
                                      cache->full_jumps(x, lambda)))
                       : cache->full_variation(x, rr);
        }
        const double exponent = functional == "jump-av" ? 2.0 : 1.0;
        const DominationReport rep =
            verify_domination(lhs, system, family, f, exponent,
                              StoppingPolicy{}.dilate);
        emit({{"max_ratio", rep.max_ratio},
              {"q50", rep.q50},
              {"q90", rep.q90},
              {"q99", rep.q99},
              {"violations", rep.violations},
              {"carleson", family.carleson}},
             out_path);
        if (!out_path.empty()) {
          std::ofstream csv(out_path + ".ratios.csv");
          csv << "point,ratio\n";
          csv.precision(17);
          for (int x = 0; x < rep.ratios.size(); ++x) {
            csv << x << ',' << rep.ratios[x] << '\n';
          }
        }
        return rep.violations == 0 ? 0 : 1;
      }
      throw ConfigError("unknown sparse verb: " + sparse_verb);
    }
    if (weights_char->parsed()) {
      auto space = load_space(space_path);
      const CubeSystem system =
          system_path.empty()
              ? build_system_for_space(space, seed)
              : cube_system_from_json(space, load_json(system_path));
      const Vec w = make_weight(*space, weight_spec);
      emit({{"weight", weight_spec},
            {"p", pp},
            {"ap", ap_characteristic(system, w, pp)},
            {"ainfty", ainfty_characteristic(system, w)}},
           out_path);
      return 0;
    }
    if (exp_run->parsed()) {
      if (config_path.empty()) config_path = global_config;
      if (config_path.empty()) {
        throw ConfigError("experiment run needs --config");
      }
      if (config_path.size() > 5 &&
          config_path.substr(config_path.size() - 5) == ".toml") {
        throw ConfigError("TOML configs are not supported; use JSON");
      }
      const ExperimentConfig config = parse_config(load_json(config_path));
      const std::filesystem::path outdir =
          out_path.empty() ? std::filesystem::path("reports")
                           : std::filesystem::path(out_path);
      const ExperimentResult result = run_experiment(config, outdir);
      std::cout << result.report.dump(2) << '\n';
      return result.pass ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
