#include "panto/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "panto/csv.hpp"
#include "panto/estimate.hpp"
#include "panto/model.hpp"
#include "panto/qseries.hpp"
#include "panto/simulate.hpp"
#include "panto/solve.hpp"
#include "panto/wkb.hpp"

namespace panto {
namespace cli {

namespace {

constexpr const char* kVersion = "0.1.0";

// Grid syntax: "lo:hi:n" (linear) or "lo:hi:log:n" (log-spaced).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  const bool logspace = parts.size() == 4 && parts[2] == "log";
  if (parts.size() != 3 && !logspace) {
    throw std::invalid_argument("grid: expected lo:hi:n or lo:hi:log:n, got '" +
                                text + "'");
  }
  double lo, hi;
  long n;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stol(parts[logspace ? 3 : 2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: cannot parse '" + text + "'");
  }
  if (n < 2 || !(hi > lo)) {
    throw std::invalid_argument("grid: need n >= 2 and hi > lo in '" + text +
                                "'");
  }
  std::vector<double> g(static_cast<std::size_t>(n));
  if (logspace) {
    if (!(lo > 0.0)) {
      throw std::invalid_argument("grid: log spacing needs lo > 0");
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (long i = 0; i < n; ++i) {
      g[static_cast<std::size_t>(i)] =
          std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    }
    g.back() = hi;
  } else {
    for (long i = 0; i < n; ++i) {
      g[static_cast<std::size_t>(i)] =
          lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
  }
  return g;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunContext {
  std::string command_line;
  std::string out_path;  // empty = stdout
  std::string model_path;
  std::optional<std::uint64_t> seed;
  bool converged = true;

  std::ostringstream csv;

  void finish_and_write(double wall_seconds) const {
    nlohmann::json manifest;
    manifest["command"] = command_line;
    manifest["tool_version"] = kVersion;
    manifest["wall_time_s"] = wall_seconds;
    manifest["converged"] = converged;
    if (!model_path.empty()) {
      char hex[19];
      std::snprintf(hex, sizeof(hex), "0x%016llx",
                    static_cast<unsigned long long>(fnv1a(read_file(model_path))));
      manifest["model_config"] = model_path;
      manifest["model_config_hash"] = hex;
    }
    if (seed) manifest["master_seed"] = *seed;
    manifest["outputs"] =
        nlohmann::json::array({out_path.empty() ? "stdout" : out_path});

    if (out_path.empty()) {
      std::cout << csv.str();
      std::cerr << manifest.dump() << "\n";
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
      out << csv.str();
      std::ofstream man(out_path + ".manifest.json");
      man << manifest.dump(2) << "\n";
    }
  }
};

void emit_estimate_rows(RunContext& ctx, const std::vector<double>& xs,
                        const std::vector<EstimateResult>& results) {
  ctx.csv << "x,value,std_error,n_samples,censored_fraction\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ctx.csv << format_double(xs[i]) << ',' << format_double(results[i].value)
            << ',' << format_double(results[i].std_error) << ','
            << format_size(results[i].n_samples) << ','
            << format_double(results[i].censored_fraction) << '\n';
  }
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::string line;
  std::vector<double> xs, ys;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (!line.empty() && !(std::isdigit(line[0]) || line[0] == '-')) {
        continue;  // header row
      }
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("grid csv: expected 'x,y' rows in " + path);
    }
    xs.push_back(std::stod(line.substr(0, comma)));
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 3) throw std::invalid_argument("grid csv: too few rows");
  return GridFunction(xs.front(), xs.back(), std::move(ys));
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"panto"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"numerical laboratory for the balanced pantograph equation and "
               "its jump diffusion"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string model_path, out_path, x_grid_text, u_grid_text, f_path;
  double x = 1.0, t_horizon = 1.0, y0 = 1.0, tol = 1e-10, q = 2.0;
  double u_ref = -1.0, a0_ref = 1.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t paths = 10000, samples = 100000, terms = 2048;
  std::size_t max_jumps = 10000, max_iter = 10000, k_terms = 200;
  bool growth = false;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model_path, "model config JSON")->required();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed (required: no silent entropy)")
        ->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--workers", workers, "Monte Carlo threads");
  };

  CLI::App* sim = app.add_subcommand("simulate", "dump one jump skeleton");
  add_model(sim);
  add_seed(sim);
  add_common(sim);
  sim->add_option("--x", x, "start point x0");
  sim->add_option("--max-jumps", max_jumps, "number of jumps to draw");

  CLI::App* ruin = app.add_subcommand("ruin", "ruin probability estimate");
  add_model(ruin);
  add_seed(ruin);
  add_common(ruin);
  ruin->add_option("--x", x, "single evaluation point");
  ruin->add_option("--x-grid", x_grid_text, "evaluation grid lo:hi:n");
  ruin->add_option("--paths", paths, "paths per point");
  ruin->add_option("--max-jumps", max_jumps, "truncation horizon in jumps");

  CLI::App* escape =
      app.add_subcommand("escape", "escape probability, series estimator");
  add_model(escape);
  add_seed(escape);
  add_common(escape);
  escape->add_option("--x", x, "single evaluation point");
  escape->add_option("--x-grid", x_grid_text, "evaluation grid lo:hi:n");
  escape->add_option("--samples", samples, "eta samples");
  escape->add_option("--terms", terms, "series terms per sample");

  CLI::App* solve = app.add_subcommand("solve", "fixed-point solve, kappa = 0");
  add_model(solve);
  solve->add_option("--out", out_path, "output path (default stdout)");
  solve->add_option("--x-grid", x_grid_text, "grid 0:x_max:n (lo must be 0)");
  solve->add_option("--y0", y0, "boundary value y(0)");
  solve->add_option("--tol", tol, "sup-norm stopping tolerance");
  solve->add_option("--max-iter", max_iter, "iteration cap");

  CLI::App* gen = app.add_subcommand("generator", "apply the generator to a "
                                                  "tabulated function");
  add_model(gen);
  gen->add_option("--out", out_path, "output path (default stdout)");
  gen->add_option("--f", f_path, "x,y CSV with the candidate function")
      ->required();

  CLI::App* wkbcmd = app.add_subcommand("wkb", "eikonal/phase/amplitude table");
  wkbcmd->add_option("--out", out_path, "output path (default stdout)");
  wkbcmd->add_option("--u-grid", u_grid_text, "grid lo:hi:n or lo:hi:log:n")
      ->required();
  wkbcmd->add_option("--u-ref", u_ref, "phase anchor (default: first node)");
  wkbcmd->add_option("--a0-ref", a0_ref, "amplitude anchor at the first node");

  CLI::App* qs = app.add_subcommand("qseries", "series solution of the "
                                               "q-difference equation");
  qs->add_option("--out", out_path, "output path (default stdout)");
  qs->add_option("--q", q, "rescaling parameter, q > 0, q != 1")->required();
  qs->add_option("--K-terms", k_terms, "series truncation order");
  qs->add_option("--x-grid", x_grid_text, "s grid lo:hi:n (default 0:10:101)");
  qs->add_flag("--growth", growth, "emit S,M growth table instead of s,phi");

  CLI::App* check = app.add_subcommand(
      "check", "martingale residual of the tabulated escape probability");
  add_model(check);
  add_seed(check);
  add_common(check);
  check->add_option("--x-grid", x_grid_text, "evaluation points lo:hi:n");
  check->add_option("--x", x, "single evaluation point");
  check->add_option("--t", t_horizon, "martingale horizon t");
  check->add_option("--samples", samples, "eta samples for the table");
  check->add_option("--terms", terms, "series terms per sample");
  check->add_option("--paths", paths, "martingale paths per point");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    // Help/version exit cleanly; anything else is a validation failure.
    return app.exit(e) == 0 ? 0 : 1;
  }

  RunContext ctx;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) ctx.command_line += ' ';
    ctx.command_line += argv[i];
  }
  ctx.out_path = out_path;
  ctx.model_path = model_path;

  const auto t0 = std::chrono::steady_clock::now();
  int exit_code = 0;

  try {
    if (sim->parsed() || ruin->parsed() || escape->parsed() ||
        check->parsed()) {
      ctx.seed = seed;
    }

    if (sim->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      RngStream rng(seed, 0);
      const PathSkeleton skel = sample_skeleton(model, x, max_jumps, rng);
      const auto sigma = skel.jump_times();
      ctx.csv << "n,sigma_n,xi_n,zeta_n,S_n,X_n\n";
      for (std::size_t n = 0; n < skel.n_jumps(); ++n) {
        ctx.csv << format_size(n + 1) << ',' << format_double(sigma[n]) << ','
                << format_double(skel.xi[n]) << ','
                << format_double(skel.zeta[n]) << ','
                << format_double(skel.S[n]) << ',' << format_double(skel.X[n])
                << '\n';
      }
    } else if (ruin->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      const std::vector<double> xs =
          x_grid_text.empty() ? std::vector<double>{x} : parse_grid(x_grid_text);
      std::vector<EstimateResult> results;
      results.reserve(xs.size());
      for (double xi : xs) {
        results.push_back(
            estimate_ruin(model, xi, max_jumps, paths, seed, workers));
      }
      emit_estimate_rows(ctx, xs, results);
    } else if (escape->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      const std::vector<double> xs =
          x_grid_text.empty() ? std::vector<double>{x} : parse_grid(x_grid_text);
      const auto eta = sample_eta_batch(model, terms, samples, seed, workers);
      std::vector<EstimateResult> results;
      results.reserve(xs.size());
      for (double xi : xs) {
        results.push_back(escape_series_from_batch(eta, xi).lower);
      }
      emit_estimate_rows(ctx, xs, results);
    } else if (solve->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      std::vector<double> grid = x_grid_text.empty()
                                     ? parse_grid("0:20:2001")
                                     : parse_grid(x_grid_text);
      if (grid.front() != 0.0) {
        throw std::invalid_argument("solve: grid must start at 0");
      }
      const PicardResult res = picard_solve(
          model, y0, grid.back(), grid.size(), PicardOptions{tol, max_iter});
      ctx.csv << "x,y\n";
      for (std::size_t i = 0; i < res.y.size(); ++i) {
        ctx.csv << format_double(res.y.node(i)) << ','
                << format_double(res.y.value_at(i)) << '\n';
      }
      if (!res.converged) {
        ctx.converged = false;
        std::cerr << "solve: no convergence within " << max_iter
                  << " iterations (last change " << res.last_change
                  << "); partial output flagged in manifest\n";
        exit_code = 2;
      }
    } else if (gen->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      const GridFunction f = read_grid_csv(f_path);
      ctx.csv << "x,Lf\n";
      for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        ctx.csv << format_double(f.node(i)) << ','
                << format_double(generator_apply(model, f, f.node(i))) << '\n';
      }
    } else if (wkbcmd->parsed()) {
      std::vector<double> grid = parse_grid(u_grid_text);
      const double anchor = u_ref > 0.0 ? u_ref : grid.front();
      const wkb::WkbProfile prof =
          wkb::compute_profile(std::move(grid), anchor, a0_ref);
      ctx.csv << "u,w,V,A0_minus,A0_plus\n";
      for (std::size_t i = 0; i < prof.u.size(); ++i) {
        ctx.csv << format_double(prof.u[i]) << ',' << format_double(prof.w[i])
                << ',' << format_double(prof.V[i]) << ','
                << format_double(prof.A0_minus[i]) << ','
                << format_double(prof.A0_plus[i]) << '\n';
      }
    } else if (qs->parsed()) {
      const qseries::SeriesPoly poly(q, k_terms);
      if (growth) {
        const std::vector<double> grid = x_grid_text.empty()
                                             ? parse_grid("0:50:50")
                                             : parse_grid(x_grid_text);
        const auto table =
            qseries::growth_diagnostic(poly, grid.back(), grid.size());
        ctx.csv << "S,M\n";
        for (const auto& [s_val, m_val] : table) {
          ctx.csv << format_double(s_val) << ',' << format_double(m_val)
                  << '\n';
        }
      } else {
        const std::vector<double> grid = x_grid_text.empty()
                                             ? parse_grid("0:10:101")
                                             : parse_grid(x_grid_text);
        ctx.csv << "s,phi\n";
        for (double s : grid) {
          ctx.csv << format_double(s) << ','
                  << format_double(qseries::continue_phi(poly, s, 1.0)) << '\n';
        }
      }
    } else if (check->parsed()) {
      const ModelSpec model = load_model_file(model_path);
      const std::vector<double> xs =
          x_grid_text.empty() ? std::vector<double>{x} : parse_grid(x_grid_text);
      const auto eta = sample_eta_batch(model, terms, samples, seed, workers);
      const GridFunction table = tabulate_escape_profile(eta, -5.0, 500.0, 1011);
      ctx.csv << "x,t,f_x,mean,residual,std_error\n";
      // The martingale paths get their own stream domain, disjoint from the
      // table batch.
      const std::uint64_t path_seed = seed + 0x517cc1b727220a95ULL;
      for (double xi : xs) {
        const MartingaleCheck mc = check_martingale(model, table, xi,
                                                    t_horizon, paths,
                                                    path_seed, workers);
        ctx.csv << format_double(xi) << ',' << format_double(t_horizon) << ','
                << format_double(table(xi)) << ',' << format_double(mc.mean_f)
                << ',' << format_double(mc.residual) << ','
                << format_double(mc.std_error) << '\n';
      }
    }
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double wall =
      std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
  try {
    ctx.finish_and_write(wall);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace cli
}  // namespace panto
