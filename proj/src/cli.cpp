#include "hcdyn/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hcdyn/atlas.hpp"
#include "hcdyn/checks.hpp"
#include "hcdyn/core_map.hpp"
#include "hcdyn/dynamics.hpp"
#include "hcdyn/errors.hpp"
#include "hcdyn/fixed_points.hpp"
#include "hcdyn/l1_lift.hpp"
#include "hcdyn/serialize.hpp"

namespace hcdyn {

namespace {

struct Options {
  double theta = 0.0;
  double l = 0.0;
  std::optional<double> l1;
  std::optional<double> l2;
  std::string format;
  std::string output;

  double x0 = 0.0;
  double y0 = 0.0;
  double tol = kDefaultTol;
  std::size_t max_iters = kDefaultMaxIters;

  std::size_t n = 50;

  std::vector<double> thetas;
  std::vector<double> ls;
  double theta_min = 0.5;
  double theta_max = 25.0;
  std::size_t theta_steps = 0;
  double l_min = 0.5;
  double l_max = 200.0;
  std::size_t l_steps = 0;
  bool classify_only = false;
  unsigned threads = 0;
  std::string nullcline_out;
  std::size_t nullcline_samples = 200;

  std::size_t dim = 64;
  double ratio = 0.9;
  std::optional<std::uint64_t> seed;

  std::uint64_t check_seed = kDefaultSeed;
  std::vector<int> criteria;
  bool quiet = false;

  std::string format_or(const char* fallback) const { return format.empty() ? fallback : format; }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw InvalidArgument("cannot open output file " + path);
  }
  f << text;
  if (!f) {
    throw Error("failed writing " + path);
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void add_params(CLI::App* cmd, Options& o) {
  cmd->add_option("--theta", o.theta, "theta > 0")->required();
  cmd->add_option("--L", o.l, "L > 0")->required();
}

// Only one subcommand runs, so the shared field stays empty unless given.
void add_format(CLI::App* cmd, Options& o, const std::string& fallback) {
  cmd->add_option("--format", o.format, "json or csv (default " + fallback + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("-o,--output", o.output, "output file (default stdout)");
}

std::vector<double> grid_from(const std::vector<double>& list, double lo, double hi,
                              std::size_t steps, const char* name) {
  if (!list.empty()) {
    return list;
  }
  if (steps == 0) {
    throw InvalidArgument(std::string("atlas needs --") + name + "s or --" + name + "-steps");
  }
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw InvalidArgument(std::string("invalid ") + name + " range");
  }
  return linear_grid(lo, hi, steps);
}

int cmd_fixed_points(const Options& o, std::ostream& out) {
  const auto fps = fixed_point_set(Params(o.theta, o.l));
  emit(o.format_or("json") == "csv" ? fixed_points_csv(fps) : fixed_points_json(fps) + "\n", o.output, out);
  return 0;
}

int cmd_classify(const Options& o, std::ostream& out) {
  out << to_string(classify_region(Params(o.theta, o.l))) << '\n';
  return 0;
}

int cmd_trajectory(const Options& o, std::ostream& out) {
  if (o.l1.has_value() != o.l2.has_value()) {
    throw InvalidArgument("--L1 and --L2 go together");
  }
  const Params p = o.l1 ? Params(o.theta, *o.l1, *o.l2) : Params(o.theta, o.l);
  const Trajectory tr = iterate_trajectory(p, {o.x0, o.y0}, o.max_iters, o.tol);
  if (o.format_or("csv") == "json") {
    nlohmann::json j = to_json(tr);
    j["prediction"] = nullptr;
    if (p.symmetric()) {
      try {
        j["prediction"] = to_json(classify_limit(p, {o.x0, o.y0}));
      } catch (const ClassificationGap&) {
      }
    }
    emit(dump(j), o.output, out);
  } else {
    emit(trajectory_csv(tr), o.output, out);
  }
  return 0;
}

int cmd_bracket(const Options& o, std::ostream& out) {
  const BracketSequence b = bracketing_sequence(Params(o.theta, o.l), o.n);
  emit(o.format_or("csv") == "json" ? dump(to_json(b)) : bracket_csv(b), o.output, out);
  return 0;
}

int cmd_atlas(const Options& o, std::ostream& out) {
  AtlasConfig cfg;
  cfg.thetas = grid_from(o.thetas, o.theta_min, o.theta_max, o.theta_steps, "theta");
  cfg.ls = grid_from(o.ls, o.l_min, o.l_max, o.l_steps, "L");
  cfg.classify_only = o.classify_only;
  cfg.threads = o.threads;
  const auto rows = atlas_sweep(cfg);
  emit(o.format_or("csv") == "json" ? dump(atlas_json(rows)) : atlas_csv(rows), o.output, out);
  if (!o.nullcline_out.empty()) {
    emit(nullcline_csv(cfg, o.nullcline_samples), o.nullcline_out, out);
  }
  return 0;
}

int cmd_lift(const Options& o, std::ostream& out) {
  if (o.dim < 2) {
    throw InvalidArgument("--dim must be at least 2");
  }
  const WeightSeq w = WeightSeq::geometric(o.ratio, o.dim, o.l);
  const Params p = lift_params(o.theta, w);
  const auto lifted = lifted_fixed_points(p, w);

  nlohmann::json j = {{"theta", o.theta}, {"L", o.l}, {"weights", to_json(w)}};
  nlohmann::json fps = nlohmann::json::array();
  for (const LiftedFixedPoint& f : lifted) {
    fps.push_back({{"name", f.name},
                   {"family", std::string(to_string(f.family))},
                   {"vector", to_json(f.vector)}});
  }
  j["fixed_points"] = fps;

  std::ostringstream csv;
  csv << "name,family,j,value\n";
  for (const LiftedFixedPoint& f : lifted) {
    for (std::size_t k = 0; k < f.vector.size(); ++k) {
      csv << f.name << ',' << to_string(f.family) << ',' << k + 1 << ','
          << format_csv_number(f.vector.entries()[k]) << '\n';
    }
  }

  if (o.seed) {
    std::mt19937_64 gen(*o.seed);
    std::uniform_real_distribution<double> u(std::log(1e-6), std::log(10.0));
    std::vector<double> x(o.dim);
    for (double& e : x) {
      e = std::exp(u(gen));
    }
    TruncatedVector v(x);
    const TruncatedVector start = v;
    std::size_t steps = 0;
    int streak = 0;
    while (steps < o.max_iters && streak < kStallSteps) {
      TruncatedVector next = apply_f(p, w, v);
      double change = 0.0;
      for (std::size_t k = 0; k < o.dim; ++k) {
        change = std::max(change, std::abs(next.entries()[k] - v.entries()[k]));
      }
      v = std::move(next);
      ++steps;
      streak = change <= o.tol ? streak + 1 : 0;
    }
    nlohmann::json run = {{"seed", *o.seed},
                          {"start", to_json(start)},
                          {"iterations", steps},
                          {"final", to_json(v)},
                          {"planar_limit", nullptr},
                          {"lift_limit", nullptr},
                          {"max_abs_difference", nullptr}};
    const Trajectory tr = iterate_trajectory(p, project_to_plane(start), o.max_iters, o.tol, false);
    if (tr.limit) {
      const std::vector<double> expect = lift_limit(p, w, *tr.limit);
      double diff = 0.0;
      for (std::size_t k = 0; k < o.dim; ++k) {
        diff = std::max(diff, std::abs(expect[k] - v.entries()[k]));
      }
      run["planar_limit"] = {{"x", tr.limit->x}, {"y", tr.limit->y}};
      run["lift_limit"] = expect;
      run["max_abs_difference"] = diff;
    }
    j["run"] = run;
  }

  emit(o.format_or("json") == "csv" ? csv.str() : dump(j), o.output, out);
  return 0;
}

int cmd_check(const Options& o, std::ostream& out) {
  std::vector<CriterionResult> results;
  if (o.criteria.empty()) {
    results = run_all_checks(o.check_seed);
  } else {
    for (int id : o.criteria) {
      switch (id) {
        case 1: results.push_back(check_special_values()); break;
        case 2: results.push_back(check_oracle_equivalence()); break;
        case 3: results.push_back(check_invariance_suites(o.check_seed)); break;
        case 4: results.push_back(check_limit_theorems(o.check_seed)); break;
        case 5: results.push_back(check_period_two()); break;
        case 6: results.push_back(check_contraction(o.check_seed)); break;
        case 7: results.push_back(check_eigenvalues(o.check_seed)); break;
        case 8: results.push_back(check_lift(o.check_seed)); break;
        default: throw InvalidArgument("criteria are numbered 1 to 8");
      }
    }
  }
  bool ok = true;
  for (const CriterionResult& r : results) {
    out << format_result(r, !o.quiet);
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fixed points, limits and atlases of the two-parameter planar map W"};
  app.name("hcdyn");
  app.require_subcommand(1);

  std::function<int()> action;

  auto* fp = app.add_subcommand("fixed-points", "all fixed points with eigenvalues and stability");
  add_params(fp, o);
  add_format(fp, o, "json");
  fp->callback([&] { action = [&] { return cmd_fixed_points(o, out); }; });

  auto* cl = app.add_subcommand("classify", "region label of (theta, L)");
  add_params(cl, o);
  cl->callback([&] { action = [&] { return cmd_classify(o, out); }; });

  auto* tr = app.add_subcommand("trajectory", "iterate W from (x0, y0)");
  tr->add_option("--theta", o.theta)->required();
  auto* l_opt = tr->add_option("--L", o.l);
  auto* l1_opt = tr->add_option("--L1", o.l1);
  auto* l2_opt = tr->add_option("--L2", o.l2);
  l_opt->excludes(l1_opt)->excludes(l2_opt);
  tr->add_option("--x0", o.x0)->required();
  tr->add_option("--y0", o.y0)->required();
  tr->add_option("--tol", o.tol)->capture_default_str();
  tr->add_option("--max-iters", o.max_iters)->capture_default_str();
  add_format(tr, o, "csv");
  tr->callback([&] {
    if (l_opt->count() == 0 && l1_opt->count() == 0) {
      throw CLI::RequiredError("--L or --L1/--L2");
    }
    action = [&] { return cmd_trajectory(o, out); };
  });

  auto* br = app.add_subcommand("bracket", "bracketing sequence from (0, L)");
  add_params(br, o);
  br->add_option("--n", o.n, "steps")->capture_default_str();
  add_format(br, o, "csv");
  br->callback([&] { action = [&] { return cmd_bracket(o, out); }; });

  auto* at = app.add_subcommand("atlas", "region atlas over a (theta, L) grid");
  at->add_option("--thetas", o.thetas, "explicit theta values")->delimiter(',');
  at->add_option("--Ls", o.ls, "explicit L values")->delimiter(',');
  at->add_option("--theta-min", o.theta_min)->capture_default_str();
  at->add_option("--theta-max", o.theta_max)->capture_default_str();
  at->add_option("--theta-steps", o.theta_steps);
  at->add_option("--L-min", o.l_min)->capture_default_str();
  at->add_option("--L-max", o.l_max)->capture_default_str();
  at->add_option("--L-steps", o.l_steps);
  at->add_flag("--classify-only", o.classify_only, "skip omega-limit boxes");
  at->add_option("--threads", o.threads, "worker threads (default HCDYN_THREADS or all cores)");
  at->add_option("--nullcline-out", o.nullcline_out, "write psi-nullcline samples here");
  at->add_option("--nullcline-samples", o.nullcline_samples)->capture_default_str();
  add_format(at, o, "csv");
  at->callback([&] { action = [&] { return cmd_atlas(o, out); }; });

  auto* lf = app.add_subcommand("lift", "lifted fixed points of the truncated operator");
  add_params(lf, o);
  lf->add_option("--dim", o.dim, "truncation length")->capture_default_str();
  lf->add_option("--ratio", o.ratio, "geometric weight ratio")->capture_default_str();
  lf->add_option("--seed", o.seed, "iterate a random start and compare with the lifted limit");
  lf->add_option("--tol", o.tol)->capture_default_str();
  lf->add_option("--max-iters", o.max_iters)->capture_default_str();
  add_format(lf, o, "json");
  lf->callback([&] { action = [&] { return cmd_lift(o, out); }; });

  auto* ck = app.add_subcommand("check", "run the property suite");
  ck->add_option("--seed", o.check_seed)->capture_default_str();
  ck->add_option("--criterion", o.criteria, "only these criteria (1-8)")->delimiter(',');
  ck->add_flag("--quiet", o.quiet, "one line per criterion");
  ck->callback([&] { action = [&] { return cmd_check(o, out); }; });

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("hcdyn");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) {
    argv.push_back(s.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hcdyn
