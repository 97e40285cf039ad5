#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smp/embedding.hpp"
#include "smp/paths.hpp"
#include "smp/report.hpp"
#include "smp/suites.hpp"

namespace {

using namespace smp;

StatePoint parse_point(const std::string& csv) {
  StatePoint p;
  std::vector<double> coords;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) coords.push_back(std::stod(field));
  if (coords.empty()) throw ConfigError("empty point");
  p.coords = Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
  return p;
}

void emit(const SuiteReport& report, const std::string& out, const std::string& format) {
  std::string text;
  if (format == "json")
    text = report.to_json_string();
  else if (format == "md")
    text = render_markdown(report.to_json());
  else if (format == "csv")
    text = render_csv(report.to_json());
  else
    throw ConfigError("unknown format: " + format);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + out);
    f << text;
  }
  std::cerr << "pass " << report.pass_count() << ", fail " << report.fail_count() << ", skipped "
            << report.skipped << " (" << report.wall_seconds << " s)\n";
}

StatePoint default_x0(const Example& ex, Space space) {
  switch (ex.id) {
    case ExampleId::uniform:
      return point(2.0);
    case ExampleId::brownian:
    case ExampleId::pure_jump:
    case ExampleId::pure_jump_bd:
      return point(0.0);
    case ExampleId::brownian2:
      return point(0.0, 0.0);
    case ExampleId::sticky:
    case ExampleId::severed:
      return point(1.0);
    case ExampleId::fork:
      return point(1.0, 0.0);
    case ExampleId::absorbing_brownian:
      return space == Space::original ? point(1.0) : point(1.0, 0.0);
    case ExampleId::absorbing_brownian2: {
      StatePoint p;
      p.coords = Eigen::VectorXd::Zero(space == Space::original ? 2 : 3);
      p.coords[0] = 1.0;
      return p;
    }
    case ExampleId::collapse:
      return space == Space::original ? point(0.0) : point(1.0);
  }
  return point(0.0);
}

struct StrongMarkovFixture {
  StatePoint x0;
  StoppingRule rule;
  TestFunction f;
  double s = 0.5;
  double horizon = 16.5;
};

TestFunction point_indicator(double c, const std::string& name) {
  TestFunction f;
  f.name = name;
  f.eval = [c](const StatePoint& p) { return std::abs(p.x() - c) <= 1e-12 ? 1.0 : 0.0; };
  f.sup_bound = 1.0;
  f.breakpoints = {c};
  return f;
}

StrongMarkovFixture strong_markov_fixture(const Example& ex, Space space) {
  StrongMarkovFixture fx;
  switch (ex.id) {
    case ExampleId::uniform:
      fx.x0 = point(2.0);
      fx.rule = StoppingRule::hit(SetSpec::below(0.0, false), false);
      fx.f = ex.smooth_battery[1];
      fx.horizon = 6.0;
      return fx;
    case ExampleId::sticky:
      fx.x0 = point(1.0);
      fx.rule = StoppingRule::hit(SetSpec::below(0.0, true), true);
      fx.f = space == Space::original ? point_indicator(0.0, "ind({0})")
                                      : point_indicator(-1.0, "ind({-1})");
      return fx;
    case ExampleId::fork: {
      fx.x0 = point(1.0, 0.0);
      fx.rule = StoppingRule::hit(SetSpec::below(0.0, false, 0), false);
      TestFunction f;
      f.name = "ind(up branch)";
      f.eval = [](const StatePoint& p) { return p.y() > 0.5 ? 1.0 : 0.0; };
      f.sup_bound = 1.0;
      f.breakpoints = {0.5};
      fx.f = f;
      fx.s = 0.2;
      fx.horizon = 4.0;
      return fx;
    }
    case ExampleId::severed:
      fx.x0 = point(1.0);
      fx.rule = StoppingRule::hit(SetSpec::below(-1.0, false), false);
      fx.f = ex.smooth_battery[1];
      fx.horizon = 6.0;
      return fx;
    default:
      throw UnsupportedSpaceError("no strong-Markov fixture catalogued for " + ex.name);
  }
}

int run_simulate(const std::string& example_name, const std::string& space_name,
                 const std::string& x0_csv, const std::string& test, int n, std::uint64_t seed,
                 double s, double t, double horizon, const std::string& out,
                 const std::string& format) {
  auto id = parse_example(example_name);
  if (!id) throw ConfigError("unknown example: " + example_name);
  auto space = parse_space(space_name);
  if (!space) throw ConfigError("unknown space: " + space_name);
  const Example& ex = example(*id);
  StatePoint x0 = x0_csv.empty() ? default_x0(ex, *space) : parse_point(x0_csv);

  if (test == "paths") {
    std::vector<CadlagPath> paths;
    for (int i = 0; i < n; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      paths.push_back(sample_path(ex, *space, x0, horizon, rng));
    }
    if (out.empty()) {
      write_path_csv(paths, std::cout);
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file: " + out);
      write_path_csv(paths, f);
    }
    return 0;
  }

  McTestReport mc;
  if (test == "markov") {
    mc = markov_mc_test(ex, *space, x0, s, t, ex.smooth_battery[1], n, seed);
  } else if (test == "strong-markov") {
    StrongMarkovFixture fx = strong_markov_fixture(ex, *space);
    if (!x0_csv.empty()) fx.x0 = x0;
    if (s > 0) fx.s = s;
    mc = strong_markov_mc_test(ex, *space, fx.x0, fx.rule, fx.s, fx.f, n, seed, fx.horizon);
  } else if (test == "holding-time") {
    mc = holding_time_test(n, seed);
  } else if (test == "right-limit") {
    mc = right_limit_identity_test(ex, *space, x0, t > 0 ? t : 1.7, n, seed);
  } else if (test == "branch") {
    mc = branch_frequency_test(n, seed);
  } else {
    throw ConfigError("unknown test: " + test);
  }

  SuiteReport report;
  report.config.examples = {example_name};
  report.config.suites = {"simulate:" + test};
  report.config.seed = seed;
  report.config.n = n;
  report.config.format = format;
  report.config.out = out;
  report.config.tolerances = RunConfig::default_tolerances();
  CheckRecord r;
  r.check = "mc_" + mc.test;
  r.example = mc.example;
  r.params = mc.params;
  r.params["space"] = mc.space;
  r.params["n"] = mc.n;
  r.params["seed"] = mc.seed;
  if (mc.p_value) r.params["p_value"] = *mc.p_value;
  if (mc.signed_gap) r.params["signed_gap"] = *mc.signed_gap;
  r.statistic = mc.statistic;
  r.null_value = mc.null_value;
  r.tolerance = mc.tolerance;
  r.pass = mc.pass;
  report.records.push_back(r);
  emit(report, out, format);
  return report.fail_count() == 0 ? 0 : 1;
}

int run_embed(const std::string& example_name, const std::string& in, const std::string& out) {
  auto id = parse_example(example_name);
  if (!id) throw ConfigError("unknown example: " + example_name);
  const Example& ex = example(*id);
  std::istream* isp = &std::cin;
  std::ifstream fin;
  if (!in.empty()) {
    fin.open(in);
    if (!fin) throw ConfigError("cannot open input file: " + in);
    isp = &fin;
  }
  std::ostream* osp = &std::cout;
  std::ofstream fout;
  if (!out.empty()) {
    fout.open(out, std::ios::binary);
    if (!fout) throw ConfigError("cannot open output file: " + out);
    osp = &fout;
  }
  osp->precision(17);
  std::string line;
  bool first = true;
  while (std::getline(*isp, line)) {
    if (line.empty()) continue;
    if (first && line.find_first_not_of("0123456789+-.,eE \t") != std::string::npos) {
      first = false;
      continue;  // header row
    }
    first = false;
    StatePoint x = parse_point(line);
    StatePoint xi = embed(ex.embedding, x);
    for (Eigen::Index d = 0; d < xi.dim(); ++d) {
      if (d) *osp << ',';
      *osp << xi.coords[d];
    }
    *osp << ',' << (xi.tag == PointTag::original ? "original" : "closure_added") << ','
         << xi.label << '\n';
  }
  return 0;
}

int run_invert(const std::string& example_name, double t, int order, const std::string& x_csv) {
  auto id = parse_example(example_name);
  if (!id) throw ConfigError("unknown example: " + example_name);
  const Example& ex = example(*id);
  if (!ex.U.kernel)
    throw KernelUnavailableError(ex.name + " has no grid resolvent kernel for inversion");
  StatePoint x = x_csv.empty() ? default_x0(ex, Space::original) : parse_point(x_csv);
  const TestFunction& f = ex.smooth_battery[1];
  double approx = post_widder_invert(ex.U, f, x, t, order);
  double exact = ex.P.value(t, f, x);
  std::cout << "example    " << ex.name << "\n"
            << "f          " << f.name << "\n"
            << "t          " << t << "\n"
            << "order      " << order << "\n"
            << "approx     " << approx << "\n"
            << "exact P_t  " << exact << "\n"
            << "rel error  " << std::abs(approx - exact) / std::max(std::abs(exact), 1e-300)
            << "\n";
  return 0;
}

int run_report(const std::string& in, const std::string& format, const std::string& out) {
  nlohmann::json j = parse_report_file(in);
  validate_report(j);
  std::string text;
  if (format == "json")
    text = j.dump(2) + "\n";
  else if (format == "md")
    text = render_markdown(j);
  else if (format == "csv")
    text = render_csv(j);
  else
    throw ConfigError("unknown format: " + format);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + out);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smp: strong Markov process construction toolkit"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list-examples", "enumerate the example catalogue");
  bool list_all = false;
  list_cmd->add_flag("--all", list_all, "include grid/dimension variants");

  auto* verify_cmd = app.add_subcommand("verify", "run analytic verification suites");
  std::vector<std::string> v_examples, v_suites;
  std::uint64_t v_seed = 42;
  int v_n = 10000;
  double v_grid_h = 0.01, v_grid_radius = 10.0;
  std::string v_out, v_format = "json";
  std::vector<std::string> v_tols;
  verify_cmd->add_option("--example", v_examples, "example id or 'all'")->required();
  verify_cmd->add_option("--suite", v_suites, "suite name or 'all'");
  verify_cmd->add_option("--seed", v_seed, "master seed");
  verify_cmd->add_option("--n", v_n, "Monte Carlo replication count");
  verify_cmd->add_option("--tol", v_tols, "tolerance override name=value");
  verify_cmd->add_option("--grid-h", v_grid_h, "grid spacing");
  verify_cmd->add_option("--grid-radius", v_grid_radius, "grid radius");
  verify_cmd->add_option("--out", v_out, "output file (stdout when empty)");
  verify_cmd->add_option("--format", v_format, "json|csv|md");

  auto* sim_cmd = app.add_subcommand("simulate", "sample paths and run Monte Carlo tests");
  std::string s_example, s_space = "original", s_x0, s_test = "paths", s_out, s_format = "json";
  int s_n = 10000;
  std::uint64_t s_seed = 42;
  double s_s = 0.0, s_t = 0.0, s_horizon = 3.0;
  sim_cmd->add_option("--example", s_example, "example id")->required();
  sim_cmd->add_option("--space", s_space, "original|intrinsic");
  sim_cmd->add_option("--x0", s_x0, "start point, comma separated coords");
  sim_cmd->add_option("--test", s_test, "paths|markov|strong-markov|holding-time|right-limit|branch");
  sim_cmd->add_option("--n", s_n, "replication count");
  sim_cmd->add_option("--seed", s_seed, "master seed");
  sim_cmd->add_option("--s", s_s, "post-stop lag");
  sim_cmd->add_option("--t", s_t, "time parameter");
  sim_cmd->add_option("--horizon", s_horizon, "path horizon for --test paths");
  sim_cmd->add_option("--out", s_out, "output file");
  sim_cmd->add_option("--format", s_format, "json|csv|md");

  auto* embed_cmd = app.add_subcommand("embed", "map points through the intrinsic embedding");
  std::string e_example, e_in, e_out;
  embed_cmd->add_option("--example", e_example, "example id")->required();
  embed_cmd->add_option("--in", e_in, "points CSV (stdin when empty)");
  embed_cmd->add_option("--out", e_out, "output CSV (stdout when empty)");

  auto* invert_cmd = app.add_subcommand("invert", "Post-Widder inversion of the resolvent");
  std::string i_example = "uniform", i_x;
  double i_t = 1.0;
  int i_order = 64;
  invert_cmd->add_option("--example", i_example, "uniform|pure_jump");
  invert_cmd->add_option("--t", i_t, "time");
  invert_cmd->add_option("--order", i_order, "approximant order");
  invert_cmd->add_option("--x", i_x, "evaluation point");

  auto* report_cmd = app.add_subcommand("report", "render a report JSON");
  std::string r_in, r_format = "md", r_out;
  report_cmd->add_option("--in", r_in, "input report JSON")->required();
  report_cmd->add_option("--format", r_format, "json|csv|md");
  report_cmd->add_option("--out", r_out, "output file (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // config errors exit 2
  }

  try {
    if (const char* env_seed = std::getenv("SMP_SEED")) {
      v_seed = std::strtoull(env_seed, nullptr, 10);
      s_seed = v_seed;
    }

    if (list_cmd->parsed()) {
      for (ExampleId id : list_all ? all_example_ids() : default_example_ids()) {
        const Example& ex = example(id);
        std::cout << ex.name << (ex.variant ? " [variant]" : "") << "  -  " << ex.description
                  << "\n";
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      RunConfig cfg;
      cfg.examples = v_examples;
      cfg.suites = v_suites;
      cfg.seed = v_seed;
      cfg.n = v_n;
      cfg.grid_h = v_grid_h;
      cfg.grid_radius = v_grid_radius;
      cfg.out = v_out;
      cfg.format = v_format;
      cfg.tolerances = RunConfig::default_tolerances();
      for (const auto& spec : v_tols) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("bad --tol, expected name=value: " + spec);
        cfg.tolerances[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
      }
      SuiteReport report = cmd_verify(cfg);
      emit(report, v_out, v_format);
      return report.fail_count() == 0 ? 0 : 1;
    }
    if (sim_cmd->parsed())
      return run_simulate(s_example, s_space, s_x0, s_test, s_n, s_seed, s_s, s_t, s_horizon,
                          s_out, s_format);
    if (embed_cmd->parsed()) return run_embed(e_example, e_in, e_out);
    if (invert_cmd->parsed()) return run_invert(i_example, i_t, i_order, i_x);
    if (report_cmd->parsed()) return run_report(r_in, r_format, r_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
