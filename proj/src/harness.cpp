#include "varcz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "varcz/martingale.hpp"
#include "varcz/parallel.hpp"
#include "varcz/random.hpp"
#include "varcz/variation.hpp"
#include "varcz/weights.hpp"

namespace varcz {

ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  c.raw = j;
  if (!j.contains("experiment")) {
    throw ConfigError("config: missing 'experiment'");
  }
  c.experiment = j.at("experiment");
  if (c.experiment != "domination" && c.experiment != "weighted" &&
      c.experiment != "weak11") {
    throw ConfigError("config: unknown experiment " + c.experiment);
  }
  const Json space = j.value("space", Json::object());
  c.space_kind = space.value("kind", "euclidean");
  if (c.space_kind != "euclidean" && c.space_kind != "heisenberg") {
    throw ConfigError("config: unknown space kind " + c.space_kind);
  }
  c.dimension = space.value("dimension", 1);
  c.spacing = space.value("spacing", 1.0);
  c.sides = space.value("sides", std::vector<int>{256, 512, 1024});
  if (c.sides.empty()) throw ConfigError("config: empty size list");

  c.functional = j.value("functional", "var-av");
  if (c.functional != "var-av" && c.functional != "var-tsi" &&
      c.functional != "jump-av") {
    throw ConfigError("config: unknown functional " + c.functional);
  }
  c.r = j.value("r", 3.0);
  if (j.contains("r_sweep")) {
    c.r_sweep = j.at("r_sweep").get<std::vector<double>>();
  }
  c.kernel = j.value("kernel", "hilbert");
  try {
    make_kernel(c.kernel);  // validate the registry name before any compute
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const bool needs_ladder =
      c.experiment == "weak11" ||
      (c.experiment == "domination" && c.functional == "jump-av") ||
      c.experiment == "weighted";
  if (needs_ladder && !j.contains("lambda_ladder")) {
    throw ConfigError("config: missing 'lambda_ladder'");
  }
  c.lambda_ladder = j.value("lambda_ladder", 7);
  if (c.lambda_ladder < 1) throw ConfigError("config: bad lambda_ladder");
  c.weight = j.value("weight", "power");
  if (j.contains("weight_sweep")) {
    c.weight_sweep = j.at("weight_sweep").get<std::vector<double>>();
  }
  c.p = j.value("p", 2.0);
  if (c.experiment == "weighted" && !(c.p > 1)) {
    throw ConfigError("config: weighted experiment needs p > 1");
  }
  c.functions = j.value("functions", 8);
  c.seed = j.value("seed", std::uint64_t{1});
  c.exponent =
      j.value("exponent", c.functional == "jump-av" ? 2.0 : 1.0);
  const Json thresholds = j.value("thresholds", Json::object());
  c.stability_threshold = thresholds.value("stability_factor", 0.0);
  c.ratio_band_threshold = thresholds.value("ratio_band", 0.0);
  c.growth_threshold = thresholds.value("characteristic_growth", 0.0);
  const Json pol = j.value("policy", Json::object());
  c.policy.avg_factor = pol.value("avg_factor", 4.0);
  c.policy.func_factor = pol.value("func_factor", 4.0);
  c.policy.dilate = pol.value("dilate", 3.0);
  c.point_budget = j.value("point_budget", std::int64_t{100000});
  c.kernel_eval_budget =
      j.value("kernel_eval_budget", std::int64_t{100000000});
  return c;
}

std::shared_ptr<const Space> build_space_from_config(
    const ExperimentConfig& config, int side) {
  if (config.space_kind == "euclidean") {
    return std::make_shared<Space>(Space::euclidean_grid(
        config.dimension, side, config.spacing, config.point_budget));
  }
  return std::make_shared<Space>(
      Space::heisenberg_grid(side, config.spacing, config.point_budget));
}

CubeSystem build_system_for_space(std::shared_ptr<const Space> space,
                                  std::uint64_t seed) {
  if (space->kind() == SpaceKind::euclidean) {
    const int k_min =
        static_cast<int>(std::floor(std::log2(space->spacing())));
    const double extent = (space->side_count() - 1) * space->spacing();
    const int k_max = static_cast<int>(std::floor(std::log2(extent))) + 1;
    auto systems = build_shifted_grids(space, k_min, k_max);
    return std::move(systems[0]);  // the unshifted grid
  }
  const int k_min =
      static_cast<int>(std::ceil(std::log2(space->min_spacing())));
  const int k_max = static_cast<int>(std::floor(std::log2(space->diameter())));
  return build_christ_cubes(space, 2.0, k_min, k_max, seed);
}

CVec make_test_function(const Space& space, const std::string& shape,
                        std::uint64_t seed) {
  const int n = space.size();
  Rng rng(seed);
  CVec f = CVec::Zero(n);
  if (shape == "zero") return f;
  if (shape == "random") {
    for (int i = 0; i < n; ++i) f[i] = rng.uniform();
    return f;
  }
  if (shape == "signed") {
    for (int i = 0; i < n; ++i) f[i] = rng.uniform(-1, 1);
    return f;
  }
  if (shape == "spike") {
    for (int i = 0; i < n; ++i) f[i] = 0.01 * rng.uniform();
    const int at = rng.uniform_int(n / 4, 3 * n / 4);
    f[at] = static_cast<double>(n) / 8;
    return f;
  }
  throw ConfigError("unknown test function shape: " + shape);
}

ProfileCache::ProfileCache(const Space& space, const CVec& f,
                           const Kernel* kernel)
    : space_(space), f_(f), kernel_(kernel) {
  profiles_.resize(space.size());
  parallel_for(space.size(), [&](int x) {
    profiles_[x] = std::make_unique<OperatorProfile>(
        kernel_ ? OperatorProfile::singular(space_, *kernel_, f_, x)
                : OperatorProfile::averages(space_, f_, x));
  });
}

const OperatorProfile& ProfileCache::profile(int x) const {
  return *profiles_[x];
}

double ProfileCache::window_variation(int x, double lo, double hi,
                                      double r) const {
  const auto key = std::make_tuple(x, lo, hi, r);
  auto it = var_memo_.find(key);
  if (it != var_memo_.end()) return it->second;
  const std::vector<Complex> vals = profile(x).window(lo, hi);
  const double v =
      vals.size() <= 1
          ? 0.0
          : r_variation(std::span<const Complex>(vals), r, true);
  var_memo_.emplace(key, v);
  return v;
}

int ProfileCache::window_jumps(int x, double lo, double hi,
                               double lambda) const {
  const auto key = std::make_tuple(x, lo, hi, lambda);
  auto it = jump_memo_.find(key);
  if (it != jump_memo_.end()) return it->second;
  const std::vector<Complex> vals = profile(x).window(lo, hi);
  const int v = vals.size() <= 1
                    ? 0
                    : jump_count(std::span<const Complex>(vals), lambda);
  jump_memo_.emplace(key, v);
  return v;
}

double ProfileCache::full_variation(int x, double r) const {
  return r_variation(profile(x).values(), r, true);
}

int ProfileCache::full_jumps(int x, double lambda) const {
  return jump_count(profile(x).values(), lambda);
}

PairFunctional make_variation_functional(std::shared_ptr<ProfileCache> cache,
                                         double r) {
  auto memo = std::make_shared<std::map<std::tuple<int, int, int, int>, double>>();
  PairFunctional f;
  f.name = "var";
  f.subadditivity_r = 1;  // Minkowski across a shared window endpoint
  f.eval = [cache, memo, r](const CubeSystem& system, const Cube& inner,
                            const Cube& outer) -> double {
    const auto key = std::make_tuple(inner.k, inner.id, outer.k, outer.id);
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
    const double lo = std::pow(system.kappa(), inner.k);
    const double hi = std::pow(system.kappa(), outer.k);
    double best = 0;
    for (int m : inner.members) {
      best = std::max(best, cache->window_variation(m, lo, hi, r));
    }
    memo->emplace(key, best);
    return best;
  };
  return f;
}

PairFunctional make_jump_functional(std::shared_ptr<ProfileCache> cache,
                                    double lambda) {
  auto memo = std::make_shared<std::map<std::tuple<int, int, int, int>, double>>();
  PairFunctional f;
  f.name = "jump";
  f.subadditivity_r = 2;
  f.eval = [cache, memo, lambda](const CubeSystem& system, const Cube& inner,
                                 const Cube& outer) -> double {
    const auto key = std::make_tuple(inner.k, inner.id, outer.k, outer.id);
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
    const double lo = std::pow(system.kappa(), inner.k);
    const double hi = std::pow(system.kappa(), outer.k);
    double best = 0;
    for (int m : inner.members) {
      best = std::max(
          best, lambda * std::sqrt(static_cast<double>(
                    cache->window_jumps(m, lo, hi, lambda))));
    }
    memo->emplace(key, best);
    return best;
  };
  return f;
}

PairFunctional make_jump_majorant_functional(const Space& space,
                                             const CubeSystem& system,
                                             const CVec& f, double lambda) {
  return make_jump_majorant_functional(
      space, system, f, lambda,
      short_variation_fields(space, system, f,
                             ShortVariationMode::averages));
}

PairFunctional make_jump_majorant_functional(const Space& space,
                                             const CubeSystem& system,
                                             const CVec& f, double lambda,
                                             const std::vector<Vec>& sk) {
  // Per-cube maxima of the non-tangential short variation fields.
  auto cube_max = std::make_shared<std::vector<std::vector<double>>>();
  cube_max->resize(system.num_scales());
  for (int s = 0; s < system.num_scales(); ++s) {
    const int k = system.k_min() + s;
    (*cube_max)[s].resize(system.cubes_at(k).size(), 0.0);
    for (const Cube& q : system.cubes_at(k)) {
      double mx = 0;
      for (int m : q.members) mx = std::max(mx, sk[s][m]);
      (*cube_max)[s][q.id] = mx;
    }
  }
  auto avgs = std::make_shared<CubeAverages>(system, f);
  auto stops = std::make_shared<std::vector<std::vector<int>>>(space.size());
  for (int x = 0; x < space.size(); ++x) {
    (*stops)[x] = greedy_stopping(*avgs, x, lambda, system.k_max());
  }

  PairFunctional pf;
  pf.name = "jump-majorant";
  pf.subadditivity_r = 2;
  pf.eval = [cube_max, avgs, stops](const CubeSystem& sys, const Cube& inner,
                                    const Cube& outer) -> double {
    if (inner.k >= outer.k) return 0;
    // Chain component: short variations along the ancestors of the inner
    // cube between the two scales.
    double chain_sq = 0;
    const int probe = inner.members.front();
    for (int k = inner.k; k < outer.k; ++k) {
      const int cid = sys.cube_id_of(k, probe);
      const double v = (*cube_max)[k - sys.k_min()][cid];
      chain_sq += v * v;
    }
    // Martingale component: greedy-stopping square sums, worst member.
    double mart = 0;
    const int k0 = inner.k, k1 = outer.k;
    for (int x : inner.members) {
      const auto eg = [&](int l) {
        return avgs->at(std::max(l, k0), x) - avgs->at(std::max(l, k1), x);
      };
      double sq = 0;
      const auto& st = (*stops)[x];
      for (std::size_t j = 0; j + 1 < st.size(); ++j) {
        sq += std::norm(eg(st[j + 1]) - eg(st[j]));
      }
      mart = std::max(mart, std::sqrt(sq));
    }
    return std::sqrt(chain_sq) + mart;
  };
  return pf;
}

namespace {

Json report_skeleton(const ExperimentConfig& config) {
  Json j;
  j["schema"] = "varcz-report/1";
  j["versions"] = {{"varcz", "1.0"}};
  j["experiment"] = config.experiment;
  j["config_hash"] = config_hash(config.raw);
  j["config"] = config.raw;
  return j;
}

bool points_within_budget(const ExperimentConfig& config) {
  for (int side : config.sides) {
    std::int64_t n = side;
    if (config.space_kind == "euclidean" && config.dimension == 2) {
      n *= side;
    }
    if (config.space_kind == "heisenberg") {
      n = n * n * n * n;
    }
    if (n > config.point_budget) return false;
  }
  return true;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  out.precision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << '\n';
  }
}

/// Measured domination constant for one (f, functional, lambda) instance.
struct DominationOutcome {
  double constant = 0;
  int violations = 0;
  double carleson = 0;
  bool witness_ok = false;
};

DominationOutcome run_domination_once(const ExperimentConfig& config,
                                      const Space& space,
                                      const CubeSystem& system, const CVec& f,
                                      const Kernel* kernel, double r,
                                      double lambda, Vec* ratios_out) {
  auto cache = std::make_shared<ProfileCache>(
      space, f, config.functional == "var-tsi" ? kernel : nullptr);

  Vec lhs(space.size());
  if (config.functional == "jump-av") {
    for (int x = 0; x < space.size(); ++x) {
      lhs[x] =
          lambda * std::sqrt(static_cast<double>(cache->full_jumps(x, lambda)));
    }
  } else {
    parallel_for(space.size(),
                 [&](int x) { lhs[x] = cache->full_variation(x, r); });
  }

  PairFunctional functional =
      config.functional == "jump-av"
          ? make_jump_majorant_functional(space, system, f, lambda)
          : make_variation_functional(cache, r);

  const SparseFamily family = build_sparse_family(
      system, &functional, f, system.k_max(), config.policy);
  const DominationReport rep = verify_domination(
      lhs, system, family, f, config.exponent, config.policy.dilate);

  DominationOutcome out;
  out.constant = rep.max_ratio;
  out.violations = rep.violations;
  out.carleson = family.carleson;
  out.witness_ok = !family.witnesses.empty();
  if (ratios_out) *ratios_out = rep.ratios;
  return out;
}

}  // namespace

ExperimentResult run_domination_experiment(
    const ExperimentConfig& config, const std::filesystem::path& outdir) {
  ExperimentResult result;
  result.report = report_skeleton(config);

  // Budget gate, before any compute.
  if (!points_within_budget(config)) {
    result.report["failed"] = "point budget exceeded";
    save_json(result.report, outdir / "domination-report.json");
    return result;
  }
  std::int64_t evals = 0;
  for (int side : config.sides) {
    const std::int64_t n = config.dimension == 2
                               ? std::int64_t(side) * side
                               : std::int64_t(side);
    evals += n * n * config.functions;
  }
  if (config.functional == "var-tsi" && evals > config.kernel_eval_budget) {
    result.report["failed"] = "kernel evaluation budget exceeded";
    save_json(result.report, outdir / "domination-report.json");
    return result;
  }

  const Kernel kernel = make_kernel(config.kernel);
  const bool jump = config.functional == "jump-av";
  std::vector<double> lambdas;
  if (jump) {
    for (int l = 0; l < config.lambda_ladder; ++l) {
      lambdas.push_back(std::pow(2.0, -l));
    }
  } else {
    lambdas.push_back(0);  // unused
  }

  Json sizes_json = Json::array();
  std::vector<double> size_constants;
  for (int side : config.sides) {
    auto space = build_space_from_config(config, side);
    const CubeSystem system = build_system_for_space(space, config.seed);
    double worst = 0;
    int violations = 0;
    double carleson = 0;
    bool witness_ok = true;
    std::vector<std::vector<double>> csv_rows;
    for (int fi = 0; fi < config.functions; ++fi) {
      const std::string shape = fi % 4 == 3 ? "spike" : "random";
      const CVec f =
          make_test_function(*space, shape, config.seed + 1000 * fi + side);
      for (double lambda : lambdas) {
        Vec ratios;
        const DominationOutcome out =
            run_domination_once(config, *space, system, f, &kernel, config.r,
                                lambda, fi == 0 ? &ratios : nullptr);
        worst = std::max(worst, out.constant);
        violations += out.violations;
        carleson = std::max(carleson, out.carleson);
        witness_ok = witness_ok && out.witness_ok;
        if (fi == 0 && lambda == lambdas.front()) {
          for (int x = 0; x < ratios.size(); ++x) {
            csv_rows.push_back({static_cast<double>(x), ratios[x]});
          }
        }
      }
    }
    write_csv(outdir / ("domination-ratios-" + std::to_string(side) + ".csv"),
              {"point", "ratio"}, csv_rows);
    sizes_json.push_back({{"side", side},
                          {"constant", worst},
                          {"violations", violations},
                          {"carleson", carleson},
                          {"witness_ok", witness_ok}});
    size_constants.push_back(worst);
  }
  result.report["sizes"] = sizes_json;

  const double cmax =
      *std::max_element(size_constants.begin(), size_constants.end());
  const double cmin =
      *std::min_element(size_constants.begin(), size_constants.end());
  result.report["constant_max"] = cmax;
  result.report["constant_min"] = cmin;
  result.report["stability_factor"] = cmin > 0 ? cmax / cmin : 0;

  // Optional r-sweep on the middle size with normalized constants.
  if (!config.r_sweep.empty() && config.functional != "jump-av") {
    auto space = build_space_from_config(
        config, config.sides[config.sides.size() / 2]);
    const CubeSystem system = build_system_for_space(space, config.seed);
    const CVec f = make_test_function(*space, "random", config.seed + 17);
    Json sweep = Json::array();
    for (double r : config.r_sweep) {
      const DominationOutcome out = run_domination_once(
          config, *space, system, f, &kernel, r, 0, nullptr);
      sweep.push_back({{"r", r},
                       {"constant", out.constant},
                       {"normalized", out.constant * (r - 2) / r}});
    }
    result.report["r_sweep"] = sweep;
  }

  const bool finite = std::isfinite(cmax) && cmax > 0;
  result.pass = finite;
  if (config.stability_threshold > 0 && cmin > 0) {
    result.pass = result.pass && cmax / cmin < config.stability_threshold;
  }
  result.report["pass"] = result.pass;
  save_json(result.report, outdir / "domination-report.json");
  return result;
}

ExperimentResult run_weighted_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& outdir) {
  ExperimentResult result;
  result.report = report_skeleton(config);
  if (!points_within_budget(config)) {
    result.report["failed"] = "point budget exceeded";
    save_json(result.report, outdir / "weighted-report.json");
    return result;
  }

  const int side = config.sides.back();
  auto space = build_space_from_config(config, side);
  const CubeSystem system = build_system_for_space(space, config.seed);
  const CVec f = make_test_function(*space, "random", config.seed);

  Json sweep = Json::array();
  std::vector<std::vector<double>> csv_rows;
  double ratio_max = 0, ratio_min = std::numeric_limits<double>::infinity();
  double char_max = 0, char_min = std::numeric_limits<double>::infinity();
  for (double a : config.weight_sweep) {
    const Vec w = make_weight(*space, "power:" + std::to_string(a));
    const Vec sigma = make_weight(*space, "power:" + std::to_string(-a));
    const double two_w = two_weight_characteristic(system, w, sigma, config.p);
    const double ainf_w = ainfty_characteristic(system, w);
    const double ainf_s = ainfty_characteristic(system, sigma);
    const double pprime = config.p / (config.p - 1);
    const double bracket =
        std::pow(two_w, 1.0 / config.p) *
        (std::pow(ainf_w, 1.0 / pprime) + std::pow(ainf_s, 1.0 / config.p));

    const CVec fsigma = f.cwiseProduct(sigma.cast<Complex>());
    ProfileCache cache(*space, fsigma);
    double lhs = 0;
    for (int l = 0; l < config.lambda_ladder; ++l) {
      const double lambda = std::pow(2.0, -l);
      CVec field(space->size());
      for (int x = 0; x < space->size(); ++x) {
        field[x] = lambda *
                   std::sqrt(static_cast<double>(cache.full_jumps(x, lambda)));
      }
      lhs = std::max(lhs, weighted_norm(*space, field, w, config.p));
    }
    const double fnorm = weighted_norm(*space, f, sigma, config.p);
    const double ratio = lhs / (bracket * fnorm);
    ratio_max = std::max(ratio_max, ratio);
    ratio_min = std::min(ratio_min, ratio);
    char_max = std::max(char_max, two_w);
    char_min = std::min(char_min, two_w);
    sweep.push_back({{"a", a},
                     {"two_weight", two_w},
                     {"ainfty_w", ainf_w},
                     {"ainfty_sigma", ainf_s},
                     {"bracket", bracket},
                     {"lhs", lhs},
                     {"f_norm", fnorm},
                     {"ratio", ratio}});
    csv_rows.push_back({a, two_w, bracket, lhs, ratio});
  }
  write_csv(outdir / "weighted-sweep.csv",
            {"a", "two_weight", "bracket", "lhs", "ratio"}, csv_rows);
  result.report["sweep"] = sweep;
  result.report["ratio_band"] = ratio_min > 0 ? ratio_max / ratio_min : 0;
  result.report["characteristic_growth"] =
      char_min > 0 ? char_max / char_min : 0;
  result.pass = ratio_min > 0 && std::isfinite(ratio_max);
  if (config.ratio_band_threshold > 0 && ratio_min > 0) {
    result.pass =
        result.pass && ratio_max / ratio_min < config.ratio_band_threshold;
  }
  if (config.growth_threshold > 0 && char_min > 0) {
    result.pass =
        result.pass && char_max / char_min >= config.growth_threshold;
  }
  result.report["pass"] = result.pass;
  save_json(result.report, outdir / "weighted-report.json");
  return result;
}

ExperimentResult run_weak11_experiment(const ExperimentConfig& config,
                                       const std::filesystem::path& outdir) {
  ExperimentResult result;
  result.report = report_skeleton(config);
  if (!points_within_budget(config)) {
    result.report["failed"] = "point budget exceeded";
    save_json(result.report, outdir / "weak11-report.json");
    return result;
  }

  Json sizes_json = Json::array();
  std::vector<double> size_constants;
  for (int side : config.sides) {
    auto space = build_space_from_config(config, side);
    const CubeSystem system = build_system_for_space(space, config.seed);
    double worst = 0;
    double worst_nqf = 0;
    for (int fi = 0; fi < config.functions; ++fi) {
      const std::string shape = fi % 5 == 4 ? "spike" : "random";
      const CVec f =
          make_test_function(*space, shape, config.seed + 7919 * fi + side);
      const Vec s = short_variation_square(*space, system, f,
                                           ShortVariationMode::averages);
      const double l1 = space->l1_norm(f);
      if (l1 > 0) {
        const double c =
            weak_lp_quasinorm(*space, s.cast<Complex>(), 1.0) / l1;
        worst = std::max(worst, c);
      }
      // N_Q F analogue on the top-scale cubes, first function only (cost).
      if (fi == 0) {
        const PairFunctional majorant =
            make_jump_majorant_functional(*space, system, f, 1.0);
        for (const Cube& q : system.cubes_at(system.k_max())) {
          const Vec field = nontangential_n(system, majorant,
                                            CubeKey{system.k_max(), q.id});
          double l1cq = 0;
          const double radius = config.policy.dilate * system.c1() *
                                std::pow(system.kappa(), q.k);
          for (int y = 0; y < space->size(); ++y) {
            if (space->distance(q.center, y) <= radius) {
              l1cq += std::abs(f[y]) * space->weight(y);
            }
          }
          if (l1cq > 0) {
            worst_nqf = std::max(
                worst_nqf,
                weak_lp_quasinorm(*space, field.cast<Complex>(), 1.0) / l1cq);
          }
        }
      }
    }
    sizes_json.push_back({{"side", side},
                          {"weak11_constant", worst},
                          {"nqf_constant", worst_nqf}});
    size_constants.push_back(worst);
  }
  result.report["sizes"] = sizes_json;
  const double cmax =
      *std::max_element(size_constants.begin(), size_constants.end());
  const double cmin =
      *std::min_element(size_constants.begin(), size_constants.end());
  result.report["constant_max"] = cmax;
  result.report["constant_min"] = cmin;
  result.report["stability_factor"] = cmin > 0 ? cmax / cmin : 0;
  result.pass = std::isfinite(cmax) && cmax > 0;
  if (config.stability_threshold > 0 && cmin > 0) {
    result.pass = result.pass && cmax / cmin < config.stability_threshold;
  }
  result.report["pass"] = result.pass;
  save_json(result.report, outdir / "weak11-report.json");
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& outdir) {
  if (config.experiment == "domination") {
    return run_domination_experiment(config, outdir);
  }
  if (config.experiment == "weighted") {
    return run_weighted_experiment(config, outdir);
  }
  return run_weak11_experiment(config, outdir);
}

}  // namespace varcz
