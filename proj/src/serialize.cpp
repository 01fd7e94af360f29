#include "varcz/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace varcz {

Json space_to_json(const Space& space) {
  Json j;
  j["schema"] = "varcz-space/1";
  j["kind"] = space.kind() == SpaceKind::euclidean ? "euclidean" : "heisenberg";
  j["dimension"] = space.dimension();
  j["side_count"] = space.side_count();
  j["spacing"] = space.spacing();
  j["A0"] = space.quasi_triangle_constant();
  j["D"] = space.homogeneous_dimension();
  if (space.kind() == SpaceKind::heisenberg) j["tau"] = space.gauge_tau();
  return j;
}

Space space_from_json(const Json& j) {
  const std::string kind = j.at("kind");
  if (kind == "euclidean") {
    return Space::euclidean_grid(j.at("dimension"), j.at("side_count"),
                                 j.at("spacing"));
  }
  if (kind == "heisenberg") {
    return Space::heisenberg_grid(j.at("side_count"), j.at("spacing"));
  }
  throw std::invalid_argument("space_from_json: unknown kind " + kind);
}

Json cube_system_to_json(const CubeSystem& system) {
  Json j;
  j["schema"] = "varcz-cubes/1";
  j["kappa"] = system.kappa();
  j["k_min"] = system.k_min();
  j["k_max"] = system.k_max();
  j["a0"] = system.a0();
  j["C1"] = system.c1();
  j["shift_index"] = system.shift_index();
  if (system.boundary_certificate()) {
    j["boundary"] = {{"eta", system.boundary_certificate()->eta},
                     {"C3", system.boundary_certificate()->c3}};
  }
  Json scales = Json::array();
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    Json level;
    level["k"] = k;
    std::vector<int> p2c(system.space().size());
    for (int p = 0; p < system.space().size(); ++p) {
      p2c[p] = system.cube_id_of(k, p);
    }
    level["point_to_cube"] = p2c;
    Json cubes = Json::array();
    for (const Cube& q : system.cubes_at(k)) {
      Json c;
      c["center"] = q.center;
      c["parent"] = q.parent;
      c["measure"] = q.measure;
      c["diameter"] = q.diameter;
      c["diameter_exact"] = q.diameter_exact;
      if (q.has_box) {
        c["box_lo"] = std::vector<double>(q.box_lo.begin(), q.box_lo.end());
        c["box_hi"] = std::vector<double>(q.box_hi.begin(), q.box_hi.end());
      }
      cubes.push_back(std::move(c));
    }
    level["cubes"] = std::move(cubes);
    scales.push_back(std::move(level));
  }
  j["scales"] = std::move(scales);
  return j;
}

CubeSystem cube_system_from_json(std::shared_ptr<const Space> space,
                                 const Json& j) {
  const double kappa = j.at("kappa");
  const int k_min = j.at("k_min");
  const int n = space->size();
  std::vector<std::vector<Cube>> cubes;
  std::vector<IVec> p2c;
  for (const Json& level : j.at("scales")) {
    const int k = level.at("k");
    const std::vector<int> map = level.at("point_to_cube");
    if (static_cast<int>(map.size()) != n) {
      throw std::invalid_argument("cube_system_from_json: size mismatch");
    }
    std::vector<Cube> qs;
    int idx = 0;
    for (const Json& c : level.at("cubes")) {
      Cube q;
      q.k = k;
      q.id = idx++;
      q.center = c.at("center");
      q.parent = c.at("parent");
      q.measure = c.at("measure");
      q.diameter = c.at("diameter");
      q.diameter_exact = c.at("diameter_exact");
      if (c.contains("box_lo")) {
        q.has_box = true;
        const std::vector<double> lo = c.at("box_lo");
        const std::vector<double> hi = c.at("box_hi");
        for (std::size_t a = 0; a < lo.size() && a < 2; ++a) {
          q.box_lo[a] = lo[a];
          q.box_hi[a] = hi[a];
        }
      }
      qs.push_back(std::move(q));
    }
    IVec pc(n);
    for (int p = 0; p < n; ++p) {
      pc[p] = map[p];
      if (map[p] < 0 || map[p] >= static_cast<int>(qs.size())) {
        throw std::invalid_argument("cube_system_from_json: bad cube id");
      }
      qs[map[p]].members.push_back(p);
    }
    // Children from parents, one scale up.
    cubes.push_back(std::move(qs));
    p2c.push_back(std::move(pc));
  }
  for (std::size_t s = 0; s + 1 < cubes.size(); ++s) {
    for (Cube& q : cubes[s]) {
      if (q.parent >= 0) cubes[s + 1][q.parent].children.push_back(q.id);
    }
  }
  CubeSystem system(std::move(space), kappa, k_min, std::move(cubes),
                    std::move(p2c), j.at("a0"), j.at("C1"),
                    j.value("shift_index", -1));
  if (j.contains("boundary")) {
    system.set_boundary_certificate(
        SmallBoundaryCertificate{j["boundary"].at("eta").get<double>(),
                                 j["boundary"].at("C3").get<double>()});
  }
  return system;
}

Json sparse_family_to_json(const SparseFamily& family) {
  Json j;
  j["schema"] = "varcz-sparse/1";
  j["eta_target"] = family.eta_target;
  j["carleson"] = family.carleson;
  j["avg_threshold"] = family.avg_threshold;
  j["func_threshold"] = family.func_threshold;
  Json cubes = Json::array();
  for (const CubeKey& key : family.cubes) {
    cubes.push_back({{"k", key.k}, {"id", key.id}});
  }
  j["cubes"] = std::move(cubes);
  if (!family.witnesses.empty()) j["witnesses"] = family.witnesses;
  return j;
}

SparseFamily sparse_family_from_json(const Json& j) {
  SparseFamily family;
  family.eta_target = j.at("eta_target");
  family.carleson = j.at("carleson");
  family.avg_threshold = j.value("avg_threshold", 0.0);
  family.func_threshold = j.value("func_threshold", 0.0);
  for (const Json& c : j.at("cubes")) {
    family.cubes.push_back(CubeKey{c.at("k").get<int>(), c.at("id").get<int>()});
  }
  if (j.contains("witnesses")) {
    family.witnesses = j["witnesses"].get<std::vector<std::vector<int>>>();
  }
  return family;
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  Json j;
  in >> j;
  return j;
}

void save_json(const Json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  // Atomic-ish: write then rename.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t config_hash(const Json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace varcz
