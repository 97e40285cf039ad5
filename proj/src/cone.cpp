#include "smp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "smp/kernel.hpp"

namespace smp {

nlohmann::json cone_expr_to_json(const ConeExpr& e, const std::vector<std::string>& generators) {
  nlohmann::json j;
  switch (e.op) {
    case ConeExpr::Op::leaf:
      j["op"] = "leaf";
      j["generator"] = generators.at(static_cast<std::size_t>(e.leaf));
      break;
    case ConeExpr::Op::combo:
      j["op"] = "nonneg_combo";
      j["coefficients"] = {e.c1, e.c2};
      j["children"] = {cone_expr_to_json(*e.a, generators), cone_expr_to_json(*e.b, generators)};
      break;
    case ConeExpr::Op::resolvent:
      j["op"] = "apply_resolvent";
      j["alpha"] = e.alpha;
      j["child"] = cone_expr_to_json(*e.a, generators);
      break;
    case ConeExpr::Op::min:
      j["op"] = "min";
      j["children"] = {cone_expr_to_json(*e.a, generators), cone_expr_to_json(*e.b, generators)};
      break;
  }
  return j;
}

std::shared_ptr<const ConeExpr> cone_expr_from_json(const nlohmann::json& j,
                                                    const std::vector<std::string>& generators) {
  auto e = std::make_shared<ConeExpr>();
  const std::string op = j.at("op").get<std::string>();
  if (op == "leaf") {
    e->op = ConeExpr::Op::leaf;
    auto name = j.at("generator").get<std::string>();
    auto it = std::find(generators.begin(), generators.end(), name);
    if (it == generators.end()) throw Error("cone_expr_from_json: unknown generator " + name);
    e->leaf = static_cast<int>(it - generators.begin());
  } else if (op == "nonneg_combo") {
    e->op = ConeExpr::Op::combo;
    e->c1 = j.at("coefficients").at(0).get<double>();
    e->c2 = j.at("coefficients").at(1).get<double>();
    e->a = cone_expr_from_json(j.at("children").at(0), generators);
    e->b = cone_expr_from_json(j.at("children").at(1), generators);
  } else if (op == "apply_resolvent") {
    e->op = ConeExpr::Op::resolvent;
    e->alpha = j.at("alpha").get<double>();
    e->a = cone_expr_from_json(j.at("child"), generators);
  } else if (op == "min") {
    e->op = ConeExpr::Op::min;
    e->a = cone_expr_from_json(j.at("children").at(0), generators);
    e->b = cone_expr_from_json(j.at("children").at(1), generators);
  } else {
    throw Error("cone_expr_from_json: unknown op " + op);
  }
  return e;
}

namespace {

std::vector<long long> value_key(const Eigen::VectorXd& v, double tol) {
  std::vector<long long> k(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    k[static_cast<std::size_t>(i)] = std::llround(v[i] / tol);
  return k;
}

struct Builder {
  SpacePtr grid;
  const ResolventSpec* U;
  ConeBuildOptions opts;
  std::map<long long, Eigen::MatrixXd> kernels;  // alpha (quantized) -> scaled entries
  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<ConeElement> elements;

  const Eigen::MatrixXd& kernel(double alpha) {
    long long key = std::llround(alpha * 1e9);
    auto it = kernels.find(key);
    if (it == kernels.end()) it = kernels.emplace(key, U->kernel_at(alpha).entries()).first;
    return it->second;
  }

  bool try_add(ConeElement el) {
    if (elements.size() >= opts.max_elements) return false;
    auto key = value_key(el.values, opts.dedupe_tol);
    if (seen.count(key)) return false;
    seen.emplace(std::move(key), elements.size());
    elements.push_back(std::move(el));
    return true;
  }
};

ConeElement make_min(const ConeElement& a, const ConeElement& b, int depth) {
  ConeElement el;
  auto e = std::make_shared<ConeExpr>();
  e->op = ConeExpr::Op::min;
  e->a = a.expr;
  e->b = b.expr;
  el.expr = e;
  el.depth = depth;
  el.certificate_alpha = std::max(a.certificate_alpha, b.certificate_alpha);
  el.values = a.values.cwiseMin(b.values);
  el.repr = "min(" + a.repr + "," + b.repr + ")";
  return el;
}

ConeElement make_combo(const ConeElement& a, const ConeElement& b, double c1, double c2,
                       int depth) {
  ConeElement el;
  auto e = std::make_shared<ConeExpr>();
  e->op = ConeExpr::Op::combo;
  e->a = a.expr;
  e->b = b.expr;
  e->c1 = c1;
  e->c2 = c2;
  el.expr = e;
  el.depth = depth;
  el.certificate_alpha = std::max(a.certificate_alpha, b.certificate_alpha);
  el.values = c1 * a.values + c2 * b.values;
  el.repr = std::to_string(c1) + "*" + a.repr + "+" + std::to_string(c2) + "*" + b.repr;
  return el;
}

}  // namespace

std::vector<ConeElement> build_cone(const std::vector<TestFunction>& generators,
                                    const std::vector<double>& alphas, int depth,
                                    const ResolventSpec& U, SpacePtr grid,
                                    const ConeBuildOptions& opts) {
  if (depth > 3) throw DepthExceededError("build_cone: depth above 3 is not supported");
  if (depth < 0) throw Error("build_cone: negative depth");
  Builder b;
  b.grid = grid;
  b.U = &U;
  b.opts = opts;

  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!generators[i].claims.supermedian_alpha)
      throw Error("build_cone: generator " + generators[i].name +
                  " carries no supermedian certificate");
    ConeElement el;
    auto e = std::make_shared<ConeExpr>();
    e->op = ConeExpr::Op::leaf;
    e->leaf = static_cast<int>(i);
    el.expr = e;
    el.depth = 0;
    el.certificate_alpha = *generators[i].claims.supermedian_alpha;
    el.values = grid_values(generators[i], *grid);
    el.repr = generators[i].name;
    b.try_add(std::move(el));
  }

  for (int level = 1; level <= depth; ++level) {
    const std::size_t prev = b.elements.size();
    if (prev + prev * (prev - 1) / 2 > opts.max_elements)
      throw Error("build_cone: level " + std::to_string(level) +
                  " would exceed the element budget; reduce the depth or generator set");
    // Every pairwise minimum of the carried set.
    for (std::size_t i = 0; i < prev; ++i)
      for (std::size_t j = i + 1; j < prev; ++j)
        b.try_add(make_min(b.elements[i], b.elements[j], level));
    // Resolvent images, capped.
    std::size_t added = 0;
    for (double alpha : alphas) {
      const Eigen::MatrixXd& k = b.kernel(alpha);
      for (std::size_t i = 0; i < prev && added < opts.max_new_per_level; ++i) {
        ConeElement el;
        auto e = std::make_shared<ConeExpr>();
        e->op = ConeExpr::Op::resolvent;
        e->alpha = alpha;
        e->a = b.elements[i].expr;
        el.expr = e;
        el.depth = level;
        el.certificate_alpha = b.elements[i].certificate_alpha;
        el.values = k * b.elements[i].values;
        el.repr = "U^" + std::to_string(alpha) + "[" + b.elements[i].repr + "]";
        if (b.try_add(std::move(el))) ++added;
      }
    }
    // Lattice pair combinations, capped.
    added = 0;
    for (std::size_t i = 0; i < prev && added < opts.max_new_per_level; ++i) {
      for (std::size_t j = i; j < prev && added < opts.max_new_per_level; ++j) {
        for (double c1 : opts.coefficients) {
          for (double c2 : opts.coefficients) {
            if (c1 == 0.0 && c2 == 0.0) continue;
            if (added >= opts.max_new_per_level) break;
            if (b.try_add(make_combo(b.elements[i], b.elements[j], c1, c2, level))) ++added;
          }
        }
      }
    }
  }
  return std::move(b.elements);
}

bool cone_contains(const std::vector<ConeElement>& cone, const Eigen::VectorXd& v, double tol) {
  for (const auto& el : cone) {
    if (el.values.size() != v.size()) continue;
    if ((el.values - v).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

UniformityVerdict uniformity_equivalent(const std::vector<TestFunction>& H,
                                        const std::vector<TestFunction>& G,
                                        const std::vector<ProbeSequence>& probes) {
  UniformityVerdict v;
  for (const auto& seq : probes) {
    bool all_h = true, all_g = true;
    for (const auto& h : H) all_h = all_h && finite_cauchy(h, seq);
    for (const auto& g : G) all_g = all_g && finite_cauchy(g, seq);
    if (all_h != all_g) {
      v.equivalent = false;
      v.witnesses.push_back(seq.id);
    }
  }
  return v;
}

bool separates_points(const std::vector<TestFunction>& H, const StatePoint& x,
                      const StatePoint& y, double tol) {
  for (const auto& h : H)
    if (std::abs(h(x) - h(y)) > tol) return true;
  return false;
}

}  // namespace smp
