#include "hpe/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hpe/mesh_io.hpp"
#include "hpe/svg.hpp"

namespace hpe {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

int default_iterations(const std::string& problem) {
  if (problem == "ex1") return 15;
  if (problem == "ex2") return 18;
  return 16;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void load_config(std::istream& in, RunConfig& c) {
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "problem") c.problem = val;
    else if (key == "mesh") c.mesh_file = val;
    else if (key == "degree") c.initial_degree = std::stoi(val);
    else if (key == "theta") c.adapt.theta = std::stod(val);
    else if (key == "nmax") c.adapt.n_max = std::stoi(val);
    else if (key == "seed") c.adapt.seed = std::stoull(val);
    else if (key == "iters") c.iterations = std::stoi(val);
    else if (key == "out") c.out_dir = val;
    else if (key == "threads") c.adapt.threads = std::stoi(val);
    else if (key == "max_dofs") c.adapt.max_dofs = std::stol(val);
    else if (key == "epsilon") c.epsilon = std::stod(val);
    else if (key == "wall_time") c.wall_time = parse_bool(val);
    else if (key == "svg") c.svg = parse_bool(val);
    else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  load_config(f, config);
}

ProblemDef make_problem(const RunConfig& config) {
  if (config.epsilon) {
    if (config.problem != "ex1") throw ProblemError("epsilon only applies to ex1");
    return make_reaction_diffusion_1d(*config.epsilon);
  }
  return builtin_problem(config.problem);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

LineFit convergence_fit(const std::vector<ConvergenceRecord>& records, int dim, double ConvergenceRecord::*column,
                        int last) {
  std::vector<double> x, y;
  const std::size_t start = records.size() > static_cast<std::size_t>(last) ? records.size() - last : 0;
  for (std::size_t i = start; i < records.size(); ++i) {
    const double v = records[i].*column;
    if (!(v > 0.0)) continue;
    const double d = static_cast<double>(records[i].ndof);
    x.push_back(dim == 1 ? d : std::cbrt(d));
    y.push_back(std::log10(v));
  }
  return fit_line(x, y);
}

std::string csv_header() { return "iter,ndof,energy,energy_gap,err_energy_norm,err_Lp,err_W1p,seconds"; }

std::string csv_row(const ConvergenceRecord& r, bool wall_time) {
  std::ostringstream s;
  s << r.iteration << ',' << r.ndof << ',' << num(r.energy) << ',' << num(r.energy_gap) << ','
    << num(r.err_energy_norm) << ',' << num(r.err_Lp) << ',' << num(r.err_W1p) << ',';
  if (wall_time) s << std::fixed << std::setprecision(3) << r.seconds;
  return s.str();
}

RunResult run(const RunConfig& config, std::ostream& log) {
  if (!(config.adapt.theta > 0.0 && config.adapt.theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  const int iterations = config.iterations.value_or(default_iterations(config.problem));
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.adapt.n_max && *config.adapt.n_max < 1) throw std::invalid_argument("nmax must be >= 1");

  const ProblemDef problem = make_problem(config);
  Mesh mesh;
  Degrees initial;
  if (config.mesh_file) {
    std::tie(mesh, initial) = read_mesh(*config.mesh_file);
  } else {
    mesh = builtin_mesh(config.problem);
    initial.assign(mesh.num_elements(), config.initial_degree);
  }
  if (mesh.dim() != problem.dim) throw std::invalid_argument("mesh dimension does not match the problem");

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);

  RunResult result;
  result.state = std::make_unique<AdaptState>(std::move(mesh), 1);
  AdaptState& st = *result.state;
  st.degrees = initial;

  std::ofstream csv(out / "convergence.csv");
  if (!csv) throw std::runtime_error("cannot write " + (out / "convergence.csv").string());
  csv << csv_header() << '\n';

  for (int it = 0; it < iterations; ++it) {
    const ConvergenceRecord& rec = solve_and_record(st, problem, config.adapt);
    if (config.svg) {
      std::ostringstream name;
      name << "mesh_" << std::setw(3) << std::setfill('0') << it << ".svg";
      render_mesh(*st.mesh, st.degrees, (out / name.str()).string());
    }
    log << "iter " << rec.iteration << "  ndof " << rec.ndof << "  E " << std::setprecision(12) << rec.energy
        << "  gap " << std::setprecision(4) << rec.energy_gap << "  newton " << rec.newton_iterations
        << (rec.newton_converged ? "" : " (not converged)") << std::endl;
    if (!rec.newton_converged) {
      csv << csv_row(rec, config.wall_time) << '\n';
      throw SolverError("global Newton solve did not converge at iteration " + std::to_string(it));
    }
    const bool last = it + 1 == iterations;
    const bool more = !last && refine_step(st, problem, config.adapt);
    csv << csv_row(st.records.back(), config.wall_time) << '\n' << std::flush;
    if (!last && !more) {
      log << "no element marked; stopping\n";
      break;
    }
  }
  result.records = st.records;

  write_mesh((out / "final_mesh.txt").string(), *st.mesh, st.degrees);
  {
    std::ofstream sol(out / "final_solution.csv");
    sol << "element,x,y,u\n" << std::setprecision(17);
    for (int e : st.space->leaves())
      for (int i = 0; i <= st.mesh->dim(); ++i) {
        const Point x = st.mesh->vertex(st.mesh->element(e).v[i]);
        sol << e << ',' << x[0] << ',' << x[1] << ',' << st.u->value_at(e, x) << '\n';
      }
  }
  {
    std::ofstream sum(out / "summary.txt");
    sum << "problem " << problem.name << "\niterations " << st.records.size() << "\nfinal_ndof "
        << st.records.back().ndof << "\naxis " << (problem.dim == 1 ? "ndof" : "ndof^(1/3)")
        << "\n# least-squares fit of log10(error) over the last 8 iterations\n";
    const std::pair<const char*, double ConvergenceRecord::*> cols[] = {
        {"energy_gap", &ConvergenceRecord::energy_gap},
        {"err_energy_norm", &ConvergenceRecord::err_energy_norm},
        {"err_Lp", &ConvergenceRecord::err_Lp},
        {"err_W1p", &ConvergenceRecord::err_W1p}};
    for (const auto& [name, col] : cols) {
      const LineFit f = convergence_fit(st.records, problem.dim, col);
      sum << name << " slope " << num(f.slope) << " r2 " << num(f.r2) << '\n';
    }
  }
  return result;
}

}  // namespace hpe
