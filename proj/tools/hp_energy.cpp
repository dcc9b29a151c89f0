// hp-energy: competitive hp-adaptive minimisation of convex energies.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hpe/mesh_io.hpp"
#include "hpe/run.hpp"
#include "hpe/svg.hpp"
#include "hpe/verify.hpp"

namespace {

int env_threads() {
  if (const char* s = std::getenv("HP_ENERGY_THREADS")) {
    try {
      return std::max(1, std::stoi(s));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring HP_ENERGY_THREADS='" << s << "'\n";
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hp-adaptive finite elements driven by local energy reductions"};
  app.require_subcommand(1);

  hpe::RunConfig rc;
  std::optional<std::string> config_file;
  std::optional<double> theta;
  std::optional<int> nmax, iters, threads, degree;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, mesh;
  std::optional<double> epsilon;
  long max_dofs = 0;
  bool wall_time = false, no_svg = false;

  auto* run = app.add_subcommand("run", "run the adaptive loop on a built-in problem");
  run->add_option("problem", rc.problem, "ex1, ex2 or ex3")->required()->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
  run->add_option("--config", config_file, "key = value file; flags override it");
  run->add_option("--theta", theta, "marking fraction in (0,1), default 1/3");
  run->add_option("--nmax", nmax, "cap on sampled hp candidates per element");
  run->add_option("--seed", seed, "seed for candidate sampling");
  run->add_option("--iters", iters, "number of adaptive iterations");
  run->add_option("--out", out, "output directory");
  run->add_option("--threads", threads, "estimation workers (HP_ENERGY_THREADS as fallback)");
  run->add_option("--degree", degree, "initial polynomial degree");
  run->add_option("--mesh", mesh, "initial mesh file");
  run->add_option("--epsilon", epsilon, "ex1 diffusion coefficient");
  run->add_option("--max-dofs", max_dofs, "stop once the space has this many DoFs");
  run->add_flag("--wall-time", wall_time, "write wall-clock seconds into convergence.csv");
  run->add_flag("--no-svg", no_svg, "skip the per-iteration SVG meshes");

  hpe::VerifyConfig vc;
  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  verify->add_option("--seed", vc.seed, "seed for random states");
  verify->add_option("--samples", vc.samples, "random states per check");
  verify->add_option("--theta", vc.theta, "marking fraction for the threshold check");
  verify->add_option("--inject", vc.inject, "fault to inject: dmu or d2mu");

  std::string mesh_file, svg_out;
  std::optional<std::vector<double>> zoom;
  auto* render = app.add_subcommand("render", "draw a mesh file as SVG");
  render->add_option("mesh", mesh_file, "mesh file")->required()->check(CLI::ExistingFile);
  render->add_option("-o,--output", svg_out, "SVG path (default: mesh path with .svg)");
  render->add_option("--zoom", zoom, "xmin xmax ymin ymax")->expected(4);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rc.adapt.threads = env_threads();
      if (config_file) {
        const std::string problem = rc.problem;
        hpe::load_config_file(*config_file, rc);
        rc.problem = problem;
      }
      if (theta) rc.adapt.theta = *theta;
      if (nmax) rc.adapt.n_max = *nmax;
      if (seed) rc.adapt.seed = *seed;
      if (iters) rc.iterations = *iters;
      if (out) rc.out_dir = *out;
      if (threads) rc.adapt.threads = *threads;
      if (degree) rc.initial_degree = *degree;
      if (mesh) rc.mesh_file = *mesh;
      if (epsilon) rc.epsilon = *epsilon;
      if (max_dofs > 0) rc.adapt.max_dofs = max_dofs;
      if (wall_time) rc.wall_time = true;
      if (no_svg) rc.svg = false;
      hpe::run(rc, std::cout);
      std::cout << "results in " << rc.out_dir << '\n';
      return 0;
    }
    if (*verify) {
      const auto results = hpe::verify(vc, std::cout);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
    if (*render) {
      const auto [m, deg] = hpe::read_mesh(mesh_file);
      if (svg_out.empty()) svg_out = mesh_file + ".svg";
      std::optional<hpe::ViewBox> box;
      if (zoom) box = hpe::ViewBox{(*zoom)[0], (*zoom)[1], (*zoom)[2], (*zoom)[3]};
      hpe::render_mesh(m, deg, svg_out, box);
      std::cout << "wrote " << svg_out << '\n';
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
