// Acceptance suite: one line per criterion, exit nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "smp/cone.hpp"
#include "smp/embedding.hpp"
#include "smp/paths.hpp"
#include "smp/report.hpp"
#include "smp/suites.hpp"

using namespace smp;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", num, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct SuiteOutcome {
  bool all_pass = true;
  double worst_margin = 0.0;  // max statistic / tolerance over records
  int records = 0;
  double seconds = 0.0;
};

SuiteOutcome run_over(const std::string& suite, const std::vector<ExampleId>& ids,
                      const std::string& filter = "") {
  RunConfig cfg;
  cfg.tolerances = RunConfig::default_tolerances();
  SuiteOutcome out;
  auto start = std::chrono::steady_clock::now();
  std::vector<CheckRecord> records;
  int skipped = 0;
  for (ExampleId id : ids) run_suite(suite, example(id), cfg, records, skipped);
  for (const auto& r : records) {
    if (!filter.empty() && r.check != filter) continue;
    ++out.records;
    out.all_pass = out.all_pass && r.pass;
    if (r.tolerance > 0.0) out.worst_margin = std::max(out.worst_margin, r.statistic / r.tolerance);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

TestFunction point_ind(double c, const std::string& name) {
  TestFunction f;
  f.name = name;
  f.eval = [c](const StatePoint& p) { return std::abs(p.x() - c) <= 1e-12 ? 1.0 : 0.0; };
  f.sup_bound = 1.0;
  f.breakpoints = {c};
  return f;
}

std::vector<ExampleId> with_bd(const std::vector<ExampleId>& base) {
  std::vector<ExampleId> ids = base;
  ids.push_back(ExampleId::pure_jump_bd);  // >= 20 probe points for the discrete family
  return ids;
}

}  // namespace

int main() {
  const std::vector<ExampleId>& defaults = default_example_ids();

  // 1. resolvent identity sweep
  {
    SuiteOutcome o = run_over("identity", with_bd(defaults));
    criterion(1, "resolvent identity on all examples", o.all_pass && o.seconds <= 120.0,
              fmt("worst residual/tol %.3g, %.1f s", o.worst_margin, o.seconds));
  }

  // 2. Chapman-Kolmogorov
  {
    SuiteOutcome o = run_over("chapman", defaults);
    criterion(2, "Chapman-Kolmogorov on all examples", o.all_pass && o.seconds <= 120.0,
              fmt("worst residual/tol %.3g, %.1f s", o.worst_margin, o.seconds));
  }

  // 3. Laplace consistency
  {
    SuiteOutcome o = run_over("laplace", defaults);
    criterion(3, "forward Laplace transform matches the resolvent", o.all_pass,
              fmt("worst residual/tol %.3g, %.1f s", o.worst_margin, o.seconds));
  }

  // 4. supermedian domination
  {
    SuiteOutcome o = run_over("supermedian", defaults, "supermedian_domination");
    criterion(4, "e^{-at} P_t f <= f for the certified catalogue", o.all_pass,
              fmt("%.0f fixtures, %.1f s", static_cast<double>(o.records), o.seconds));
  }

  // 5. complete monotonicity
  {
    SuiteOutcome o = run_over("monotone", defaults);
    bool enough = o.records >= 3 * static_cast<int>(defaults.size());
    criterion(5, "complete monotonicity to order 8 on [0.5, 10]", o.all_pass && enough,
              fmt("%.0f fixtures, %.1f s", static_cast<double>(o.records), o.seconds));
  }

  // 6. Post-Widder inversion
  {
    SuiteOutcome o = run_over("postwidder", {ExampleId::uniform, ExampleId::pure_jump});
    criterion(6, "Post-Widder approximants within 5% and improving in order",
              o.all_pass && o.seconds <= 60.0,
              fmt("worst rel-err/tol %.3g, %.1f s", o.worst_margin, o.seconds));
  }

  // 7. strong Markov: violation detected on the original sticky space, gone intrinsically
  {
    const Example& ex = example(ExampleId::sticky);
    StoppingRule rule = StoppingRule::hit(SetSpec::below(0.0, true), true);
    McTestReport original = strong_markov_mc_test(ex, Space::original, point(1.0), rule, 0.5,
                                                  point_ind(0.0, "ind({0})"), 10000, 42, 16.5);
    McTestReport intrinsic = strong_markov_mc_test(ex, Space::intrinsic, point(1.0), rule, 0.5,
                                                   point_ind(-1.0, "ind({-1})"), 10000, 42, 16.5);
    double gap = original.signed_gap.value_or(0.0);
    bool pass = !original.pass && std::abs(gap - std::exp(-0.5)) <= 0.02 && intrinsic.pass;
    criterion(7, "sticky strong-Markov gap e^{-1/2} on E, restored on E'", pass,
              fmt("gap %.4f vs 0.6065, intrinsic stat %.2g", gap, intrinsic.statistic));
  }

  // 8. holding-time law
  {
    McTestReport ks = holding_time_test(10000, 42);
    McTestReport again = holding_time_test(10000, 42);
    bool pass = ks.pass && ks.p_value.value_or(0.0) > 0.01 && ks.statistic == again.statistic;
    criterion(8, "origin holding times follow Exp(1) (KS, seed-stable)", pass,
              fmt("D = %.4g, p = %.3g", ks.statistic, ks.p_value.value_or(0.0)));
  }

  // 9. fork branch statistics
  {
    McTestReport br = branch_frequency_test(10000, 42);
    int occupancy = br.params["branch_point_occupancy"].get<int>();
    criterion(9, "fork branches are fair and the branch point is never occupied",
              br.pass && occupancy == 0,
              fmt("|up-frac - 1/2| = %.4g, occupancy %g", br.statistic,
                  static_cast<double>(occupancy)));
  }

  // 10. embedding catalogue
  {
    bool pass = true;
    std::string why;
    const Example& st = example(ExampleId::sticky);
    int closure = 0;
    for (const auto& p : st.intrinsic_grid->points())
      if (p.tag == PointTag::closure_added) {
        ++closure;
        pass = pass && std::abs(p.x() + 1.0) <= 1e-12;
      }
    pass = pass && closure == 1;
    if (closure != 1) why += "sticky closure count; ";

    const Example& fk = example(ExampleId::fork);
    int up = 0, down = 0, other = 0;
    for (const auto& p : fk.intrinsic_grid->points()) {
      if (p.tag != PointTag::closure_added) continue;
      if (same_coords(p, point(0.0, 1.0)))
        ++up;
      else if (same_coords(p, point(0.0, -1.0)))
        ++down;
      else
        ++other;
    }
    pass = pass && up == 1 && down == 1 && other == 0;
    if (up != 1 || down != 1 || other != 0) why += "fork closure points; ";

    const Example& sv = example(ExampleId::severed);
    bool identified = same_coords(embed(sv.embedding, point(-1.0)), embed(sv.embedding, point(0.0)));
    bool separated = separates_points(sv.r_catalogue, point(-1.0), point(0.0));
    pass = pass && identified && !separated;
    if (!identified || separated) why += "severed identification; ";

    const Example& cl = example(ExampleId::collapse);
    pass = pass && cl.intrinsic_grid->size() == 1;
    double u_a = cl.U.value(1.0, cl.smooth_battery[1], point(-3.0));
    double u_b = cl.U.value(1.0, cl.smooth_battery[1], point(4.0));
    pass = pass && std::abs(u_a - u_b) <= 1e-12;
    if (cl.intrinsic_grid->size() != 1) why += "collapse size; ";
    criterion(10, "intrinsic state spaces match the worked catalogue", pass, why);
  }

  // 11. generator pairs with side-condition rejections
  {
    SuiteOutcome o = run_over("generator",
                              {ExampleId::uniform, ExampleId::brownian, ExampleId::pure_jump,
                               ExampleId::sticky, ExampleId::severed, ExampleId::fork});
    bool rejections = !example(ExampleId::sticky).rejected_pairs.empty() &&
                      !example(ExampleId::severed).rejected_pairs.empty();
    criterion(11, "generator pairs g = U^a f with rejection tests", o.all_pass && rejections,
              fmt("worst residual/tol %.3g, %.1f s", o.worst_margin, o.seconds));
  }

  // 12. canonicity of the embedding
  {
    SuiteOutcome o = run_over("canonicity", {ExampleId::sticky, ExampleId::fork});
    criterion(12, "transfer map to an affine rescaling is bijective and Cauchy-preserving",
              o.all_pass, fmt("%.0f transfers, %.1f s", static_cast<double>(o.records), o.seconds));
  }

  // 13. byte-identical reports
  {
    RunConfig cfg;
    cfg.examples = {"sticky"};
    cfg.suites = {"separation", "canonicity", "generator"};
    cfg.tolerances = RunConfig::default_tolerances();
    std::string a = cmd_verify(cfg).to_json_string();
    std::string b = cmd_verify(cfg).to_json_string();
    criterion(13, "identical config and seed give byte-identical reports", a == b,
              fmt("%g bytes", static_cast<double>(a.size())));
  }

  std::printf("%d of 13 criteria passed\n", 13 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
