#include <cmath>
#include <fstream>
#include <sstream>

#include "vip/harness.hpp"

namespace vip {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string sub(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) fail(sub(path, key), "expected a number");
  return v.get<double>();
}

std::optional<double> opt_number(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_number(j, key, path);
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) fail(sub(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> to_doubles(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) fail(path, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Vector to_vector(const json& v, const std::string& path) {
  const auto d = to_doubles(v, path);
  if (d.empty()) fail(path, "vector must be nonempty");
  return Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Vector get_vector(const json& j, const char* key, const std::string& path) {
  return to_vector(field(j, key, path), sub(path, key));
}

Matrix get_matrix(const json& j, const char* key, const std::string& path) {
  const json& rows = field(j, key, path);
  const std::string p = sub(path, key);
  if (!rows.is_array() || rows.empty()) fail(p, "expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto row = to_doubles(rows[static_cast<std::size_t>(r)], p);
    if (static_cast<Eigen::Index>(row.size()) != n) fail(p, "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Eigen::Index get_dim(const json& j, const std::string& path) {
  const json& v = field(j, "dim", path);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    fail(sub(path, "dim"), "expected a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json mat_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Runs a constructor, turning library errors into ConfigError tagged with path.
template <class F>
auto build(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

// --- sets ----------------------------------------------------------------------

ConvexSet parse_set_at(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> ConvexSet {
    if (type == "box") return ConvexSet::box(get_vector(j, "lower", path), get_vector(j, "upper", path));
    if (type == "ball") return ConvexSet::ball(get_vector(j, "center", path), get_number(j, "radius", path));
    if (type == "halfspace") {
      return ConvexSet::halfspace(get_vector(j, "normal", path), get_number(j, "offset", path));
    }
    if (type == "hyperplane") {
      return ConvexSet::hyperplane(get_vector(j, "normal", path), get_number(j, "offset", path));
    }
    if (type == "affine") {
      std::vector<Vector> basis;
      if (j.contains("basis")) {
        const json& b = j.at("basis");
        if (!b.is_array()) fail(sub(path, "basis"), "expected an array of vectors");
        for (const auto& v : b) basis.push_back(to_vector(v, sub(path, "basis")));
      }
      return ConvexSet::affine(get_vector(j, "basepoint", path), basis);
    }
    if (type == "whole") return ConvexSet::whole(get_dim(j, path));
    if (type == "intersection") {
      const json& m = field(j, "members", path);
      if (!m.is_array()) fail(sub(path, "members"), "expected an array");
      std::vector<ConvexSet> members;
      for (std::size_t i = 0; i < m.size(); ++i) {
        members.push_back(parse_set_at(m[i], sub(path, "members[" + std::to_string(i) + "]")));
      }
      const double tol = opt_number(j, "tol", path).value_or(ConvexSet::kDefaultDykstraTol);
      const auto max_iter = static_cast<std::size_t>(
          opt_number(j, "max_iter", path).value_or(ConvexSet::kDefaultDykstraMaxIter));
      return ConvexSet::intersection(std::move(members), tol, max_iter);
    }
    fail(sub(path, "type"), "unknown set type '" + type + "'");
  });
}

// --- operators -------------------------------------------------------------------

NonexpansiveMap parse_T(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> NonexpansiveMap {
    if (type == "identity") return NonexpansiveMap::identity(get_dim(j, path));
    if (type == "projection") return NonexpansiveMap::projection(parse_set_at(field(j, "set", path), sub(path, "set")));
    if (type == "composition") {
      const json& s = field(j, "sets", path);
      if (!s.is_array()) fail(sub(path, "sets"), "expected an array");
      std::vector<ConvexSet> sets;
      for (std::size_t i = 0; i < s.size(); ++i) {
        sets.push_back(parse_set_at(s[i], sub(path, "sets[" + std::to_string(i) + "]")));
      }
      return NonexpansiveMap::composition(std::move(sets));
    }
    if (type == "averaged") {
      return NonexpansiveMap::averaged(parse_T(field(j, "base", path), sub(path, "base")),
                                       get_number(j, "weight", path));
    }
    if (type == "rotation2d") return NonexpansiveMap::rotation2d(get_number(j, "angle", path));
    fail(sub(path, "type"), "unknown map type '" + type + "'");
  });
}

json T_json(const NonexpansiveMap& t) {
  return std::visit(
      overloaded{
          [](const IdentityMap& i) { return json{{"type", "identity"}, {"dim", i.dim}}; },
          [](const SetProjection& p) { return json{{"type", "projection"}, {"set", to_json(p.set)}}; },
          [](const ProjectionComposition& c) {
            json sets = json::array();
            for (const auto& s : c.sets) sets.push_back(to_json(s));
            return json{{"type", "composition"}, {"sets", sets}};
          },
          [](const AveragedMap& a) {
            return json{{"type", "averaged"}, {"base", T_json(*a.base)}, {"weight", a.weight}};
          },
          [](const Rotation2D& r) { return json{{"type", "rotation2d"}, {"angle", r.angle}}; },
      },
      t.variant());
}

LipschitzMap parse_f(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> LipschitzMap {
    if (type == "zero") return LipschitzMap::zero(get_dim(j, path));
    if (type == "constant") return LipschitzMap::constant(get_vector(j, "value", path));
    if (type == "affine") return LipschitzMap::affine(get_matrix(j, "matrix", path), get_vector(j, "shift", path));
    fail(sub(path, "type"), "unknown map type '" + type + "'");
  });
}

json f_json(const LipschitzMap& f) {
  return std::visit(overloaded{
                        [](const ZeroMap& z) { return json{{"type", "zero"}, {"dim", z.dim}}; },
                        [](const ConstantMap& c) { return json{{"type", "constant"}, {"value", vec_json(c.value)}}; },
                        [](const AffineMap& a) {
                          return json{{"type", "affine"}, {"matrix", mat_json(a.matrix)}, {"shift", vec_json(a.shift)}};
                        },
                    },
                    f.variant());
}

StrongMonotoneMap parse_F(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> StrongMonotoneMap {
    if (type == "identity") return StrongMonotoneMap::identity(get_dim(j, path));
    if (type == "affine_spd") {
      return StrongMonotoneMap::affine_spd(get_matrix(j, "matrix", path), get_vector(j, "shift", path));
    }
    if (type == "scaled_identity") {
      return StrongMonotoneMap::scaled_identity(get_number(j, "eta", path), get_vector(j, "shift", path));
    }
    fail(sub(path, "type"), "unknown operator type '" + type + "'");
  });
}

json F_json(const StrongMonotoneMap& F) {
  return std::visit(
      overloaded{
          [](const IdentityOperator& i) { return json{{"type", "identity"}, {"dim", i.dim}}; },
          [](const AffineSPD& a) {
            return json{{"type", "affine_spd"}, {"matrix", mat_json(a.matrix)}, {"shift", vec_json(a.shift)}};
          },
          [](const ScaledIdentityShift& s) {
            return json{{"type", "scaled_identity"}, {"eta", s.eta}, {"shift", vec_json(s.shift)}};
          },
      },
      F.variant());
}

json problem_json(const ProblemInstance& p) {
  return json{{"dim", p.dim()},
              {"Q", to_json(p.Q())},
              {"T", T_json(p.T())},
              {"f", f_json(p.f())},
              {"F", F_json(p.F())},
              {"limit_case", p.limit_case()},
              {"constants", {{"alpha", p.alpha()}, {"eta", p.eta()}, {"kappa", p.kappa()}}}};
}

ProblemInstance parse_problem(const json& j, const std::string& path) {
  ConvexSet q = parse_set_at(field(j, "Q", path), sub(path, "Q"));
  NonexpansiveMap t = parse_T(field(j, "T", path), sub(path, "T"));
  LipschitzMap f = parse_f(field(j, "f", path), sub(path, "f"));
  StrongMonotoneMap F = parse_F(field(j, "F", path), sub(path, "F"));
  bool limit = false;
  if (j.contains("limit_case")) {
    if (!j.at("limit_case").is_boolean()) fail(sub(path, "limit_case"), "expected a boolean");
    limit = j.at("limit_case").get<bool>();
  }
  ProblemInstance p = build(path, [&] { return ProblemInstance(q, t, f, F, limit); });
  if (j.contains("dim") && get_dim(j, path) != p.dim()) {
    fail(sub(path, "dim"), "does not match the dimension of Q, T, f and F");
  }
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    const std::string cp = sub(path, "constants");
    auto check = [&](const char* key, double actual) {
      if (auto v = opt_number(c, key, cp)) {
        if (std::abs(*v - actual) > 1e-9 * std::max(1.0, std::abs(actual))) {
          fail(sub(cp, key), "stated value disagrees with the certified constant " +
                                 std::to_string(actual));
        }
      }
    };
    check("alpha", p.alpha());
    check("eta", p.eta());
    check("kappa", p.kappa());
  }
  return p;
}

// --- schedules ---------------------------------------------------------------------

TailRule parse_tail(const json& j, const std::string& path) {
  if (!j.contains("tail")) return TailRule::Hold;
  const std::string t = get_string(j, "tail", path);
  if (t == "hold") return TailRule::Hold;
  if (t == "harmonic") return TailRule::Harmonic;
  fail(sub(path, "tail"), "expected 'hold' or 'harmonic'");
}

const char* tail_name(TailRule t) { return t == TailRule::Hold ? "hold" : "harmonic"; }

json custom_json(const CustomTable& t, const char* key) {
  return json{{"type", "custom"}, {key, t.values}, {"tail", tail_name(t.tail)}};
}

AlphaSchedule parse_alpha(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> AlphaSchedule {
    if (type == "power") return AlphaSchedule::power_law(get_number(j, "a", path), get_number(j, "theta", path));
    if (type == "geometric") return AlphaSchedule::geometric(get_number(j, "a", path), get_number(j, "rho", path));
    if (type == "constant") return AlphaSchedule::constant(get_number(j, "a", path));
    if (type == "custom") {
      return AlphaSchedule::custom(to_doubles(field(j, "values", path), sub(path, "values")), parse_tail(j, path));
    }
    fail(sub(path, "type"), "unknown alpha schedule '" + type + "'");
  });
}

json alpha_json(const AlphaSchedule& s) {
  return std::visit(overloaded{
                        [](const PowerLawAlpha& p) { return json{{"type", "power"}, {"a", p.a}, {"theta", p.theta}}; },
                        [](const GeometricAlpha& g) { return json{{"type", "geometric"}, {"a", g.a}, {"rho", g.rho}}; },
                        [](const ConstantAlpha& c) { return json{{"type", "constant"}, {"a", c.a}}; },
                        [](const CustomTable& t) { return custom_json(t, "values"); },
                    },
                    s.variant());
}

BetaSchedule parse_beta(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> BetaSchedule {
    if (type == "constant") return BetaSchedule::constant(get_number(j, "b", path));
    if (type == "power_decay") {
      return BetaSchedule::power_decay(get_number(j, "b", path), get_number(j, "gamma", path));
    }
    if (type == "custom") {
      return BetaSchedule::custom(to_doubles(field(j, "values", path), sub(path, "values")), parse_tail(j, path));
    }
    fail(sub(path, "type"), "unknown beta schedule '" + type + "'");
  });
}

json beta_json(const BetaSchedule& s) {
  return std::visit(overloaded{
                        [](const ConstantBeta& c) { return json{{"type", "constant"}, {"b", c.b}}; },
                        [](const PowerDecayBeta& p) {
                          return json{{"type", "power_decay"}, {"b", p.b}, {"gamma", p.gamma}};
                        },
                        [](const CustomTable& t) { return custom_json(t, "values"); },
                    },
                    s.variant());
}

DirectionRule parse_direction(const json& j, const std::string& path, std::uint64_t seed) {
  if (!j.contains("direction")) return RandomDirection{seed};
  const json& d = j.at("direction");
  const std::string p = sub(path, "direction");
  const std::string type = get_string(d, "type", p);
  if (type == "fixed") return build(p, [&] { return ErrorSchedule::fixed_direction(get_vector(d, "vector", p)); });
  if (type == "random") {
    if (d.contains("seed")) {
      if (!d.at("seed").is_number_unsigned()) fail(sub(p, "seed"), "expected an unsigned integer");
      return RandomDirection{d.at("seed").get<std::uint64_t>()};
    }
    return RandomDirection{seed};
  }
  fail(sub(p, "type"), "expected 'fixed' or 'random'");
}

json direction_json(const DirectionRule& r) {
  return std::visit(overloaded{
                        [](const FixedDirection& f) { return json{{"type", "fixed"}, {"vector", vec_json(f.unit)}}; },
                        [](const RandomDirection& r) { return json{{"type", "random"}, {"seed", r.seed}}; },
                    },
                    r);
}

ErrorSchedule parse_error(const json& j, const std::string& path, std::uint64_t seed) {
  const std::string type = get_string(j, "type", path);
  return build(path, [&]() -> ErrorSchedule {
    if (type == "zero") return ErrorSchedule::zero();
    const DirectionRule dir = parse_direction(j, path, seed);
    if (type == "summable") return ErrorSchedule::summable(get_number(j, "c", path), get_number(j, "rho", path), dir);
    if (type == "relatively_small") return ErrorSchedule::relatively_small(get_number(j, "c", path), dir);
    if (type == "custom") {
      return ErrorSchedule::custom(to_doubles(field(j, "norms", path), sub(path, "norms")), parse_tail(j, path), dir);
    }
    fail(sub(path, "type"), "unknown error schedule '" + type + "'");
  });
}

json error_json(const ErrorSchedule& e) {
  json out = std::visit(overloaded{
                            [](const ZeroError&) { return json{{"type", "zero"}}; },
                            [](const SummableError& s) { return json{{"type", "summable"}, {"c", s.c}, {"rho", s.rho}}; },
                            [](const RelativelySmallError& r) { return json{{"type", "relatively_small"}, {"c", r.c}}; },
                            [](const CustomTable& t) { return custom_json(t, "norms"); },
                        },
                        e.variant());
  if (!std::holds_alternative<ZeroError>(e.variant())) out["direction"] = direction_json(e.direction());
  return out;
}

Mode parse_mode(const std::string& s, const std::string& path) {
  if (s == "hpa") return Mode::Hpa;
  if (s == "implicit-sweep") return Mode::ImplicitSweep;
  if (s == "regularization-sweep") return Mode::RegularizationSweep;
  if (s == "oracle") return Mode::Oracle;
  if (s == "validate") return Mode::Validate;
  fail(path, "unknown mode '" + s + "'");
}

std::size_t get_count(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(sub(path, key), "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

void validate_experiment(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  if (p.limit_case()) {
    if (cfg.mode != Mode::RegularizationSweep && cfg.mode != Mode::Validate) {
      fail("mode", "limit-case instance (alpha == eta) must use mode 'regularization-sweep'");
    }
    if (!contains(p.Q(), cfg.x0, 1e-10)) fail("solver.x0", "x0 does not lie in Q");
  } else {
    build("solver", [&] {
      validate(cfg.solver_config());
      return 0;
    });
  }
  if (cfg.reference) {
    build("solver.reference", [&] {
      require_dim(*cfg.reference, p.dim(), "reference");
      return 0;
    });
  }
  if (auto bad = find_invariance_violation(p, 64, cfg.seed)) {
    fail("problem.T", "T does not map Q into Q at a probe point");
  }
  if (cfg.mode == Mode::ImplicitSweep) {
    if (cfg.sweep_t.empty()) fail("sweep.t", "implicit-sweep needs a nonempty list of t");
    const double star = delta0_star(p);
    for (double t : cfg.sweep_t) {
      if (!(t > 0.0 && t < star)) fail("sweep.t", "t out of range (0, delta0_star)");
    }
    if (!(cfg.implicit_tol > 0.0)) fail("sweep.tol", "must be positive");
  }
  if (cfg.mode == Mode::RegularizationSweep) {
    if (!p.limit_case()) fail("mode", "regularization-sweep requires problem.limit_case");
    if (cfg.sweep_eps.empty()) fail("sweep.epsilon", "needs a nonempty list");
    for (std::size_t i = 0; i < cfg.sweep_eps.size(); ++i) {
      if (!(cfg.sweep_eps[i] > 0.0)) fail("sweep.epsilon", "values must be positive");
      if (i > 0 && !(cfg.sweep_eps[i] < cfg.sweep_eps[i - 1])) {
        fail("sweep.epsilon", "values must strictly decrease");
      }
    }
  }
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Hpa:
      return "hpa";
    case Mode::ImplicitSweep:
      return "implicit-sweep";
    case Mode::RegularizationSweep:
      return "regularization-sweep";
    case Mode::Oracle:
      return "oracle";
    case Mode::Validate:
      return "validate";
  }
  return "hpa";
}

SolverConfig ExperimentConfig::solver_config() const {
  ConditionOptions opts;
  opts.literal_h2_alpha_ratio = literal_h2;
  return SolverConfig{problem, schedules, x0, max_iter, stop_tol, delta0, reference, opts, true};
}

json to_json(const ConvexSet& s) {
  return std::visit(
      overloaded{
          [](const Box& b) { return json{{"type", "box"}, {"lower", vec_json(b.lower)}, {"upper", vec_json(b.upper)}}; },
          [](const Ball& b) { return json{{"type", "ball"}, {"center", vec_json(b.center)}, {"radius", b.radius}}; },
          [](const Halfspace& h) { return json{{"type", "halfspace"}, {"normal", vec_json(h.normal)}, {"offset", h.offset}}; },
          [](const Hyperplane& h) { return json{{"type", "hyperplane"}, {"normal", vec_json(h.normal)}, {"offset", h.offset}}; },
          [](const AffineSubspace& a) {
            json basis = json::array();
            for (Eigen::Index c = 0; c < a.basis.cols(); ++c) basis.push_back(vec_json(a.basis.col(c)));
            return json{{"type", "affine"}, {"basepoint", vec_json(a.basepoint)}, {"basis", basis}};
          },
          [](const WholeSpace& w) { return json{{"type", "whole"}, {"dim", w.dim}}; },
          [](const Intersection& i) {
            json members = json::array();
            for (const auto& m : i.members) members.push_back(to_json(m));
            return json{{"type", "intersection"}, {"members", members}, {"tol", i.tol}, {"max_iter", i.max_iter}};
          },
      },
      s.variant());
}

ConvexSet parse_set(const json& j) { return parse_set_at(j, "set"); }

json to_json(const ConditionReport& r) {
  auto s = [](Verdict v) { return std::string(to_string(v)); };
  return json{{"c1", s(r.c1)},
              {"c2", s(r.c2)},
              {"c5", s(r.c5)},
              {"h1", s(r.h1)},
              {"h2", s(r.h2)},
              {"e_summable", s(r.e_summable)},
              {"e_relatively_small", s(r.e_relatively_small)},
              {"applicable", r.applicable}};
}

json to_json(const ExperimentConfig& cfg) {
  json solver{{"x0", vec_json(cfg.x0)},
              {"max_iter", cfg.max_iter},
              {"stop_tol", cfg.stop_tol},
              {"literal_h2", cfg.literal_h2}};
  if (cfg.delta0) solver["delta0"] = *cfg.delta0;
  if (cfg.reference) solver["reference"] = vec_json(*cfg.reference);

  json sweep{{"parallel", cfg.parallel}};
  if (!cfg.sweep_t.empty()) {
    sweep["t"] = cfg.sweep_t;
    sweep["tol"] = cfg.implicit_tol;
    sweep["error"] = {{"coefficient", cfg.implicit_error.coefficient},
                      {"power", cfg.implicit_error.power},
                      {"direction", direction_json(cfg.implicit_direction)}};
  }
  if (!cfg.sweep_eps.empty()) sweep["epsilon"] = cfg.sweep_eps;

  return json{{"name", cfg.name},
              {"mode", std::string(to_string(cfg.mode))},
              {"seed", cfg.seed},
              {"output", cfg.output},
              {"problem", problem_json(cfg.problem)},
              {"schedules",
               {{"alpha", alpha_json(cfg.schedules.alpha)},
                {"beta", beta_json(cfg.schedules.beta)},
                {"error", error_json(cfg.schedules.error)}}},
              {"solver", solver},
              {"sweep", sweep}};
}

ExperimentConfig parse_config(const json& j, const ConfigOverrides& ov) {
  if (!j.is_object()) fail("<root>", "expected an object");
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("seed", "expected an unsigned integer");
    seed = j.at("seed").get<std::uint64_t>();
  }
  if (ov.seed) seed = *ov.seed;

  ProblemInstance problem = parse_problem(field(j, "problem", ""), "problem");
  const json& sj = field(j, "schedules", "");
  Schedules schedules{parse_alpha(field(sj, "alpha", "schedules"), "schedules.alpha"),
                      parse_beta(field(sj, "beta", "schedules"), "schedules.beta"),
                      sj.contains("error") ? parse_error(sj.at("error"), "schedules.error", seed)
                                           : ErrorSchedule::zero()};
  const json& so = field(j, "solver", "");
  ExperimentConfig cfg{.problem = std::move(problem),
                       .schedules = std::move(schedules),
                       .x0 = get_vector(so, "x0", "solver")};
  cfg.seed = seed;
  if (j.contains("name")) cfg.name = get_string(j, "name", "");
  if (j.contains("mode")) cfg.mode = parse_mode(get_string(j, "mode", ""), "mode");
  if (j.contains("output")) cfg.output = get_string(j, "output", "");
  if (ov.output) cfg.output = *ov.output;

  if (so.contains("max_iter")) cfg.max_iter = get_count(so, "max_iter", "solver");
  if (auto v = opt_number(so, "stop_tol", "solver")) cfg.stop_tol = *v;
  cfg.delta0 = opt_number(so, "delta0", "solver");
  if (so.contains("literal_h2")) {
    if (!so.at("literal_h2").is_boolean()) fail("solver.literal_h2", "expected a boolean");
    cfg.literal_h2 = so.at("literal_h2").get<bool>();
  }
  if (so.contains("reference") && !so.at("reference").is_null()) {
    cfg.reference = get_vector(so, "reference", "solver");
  }

  cfg.implicit_direction = RandomDirection{seed};
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    if (sw.contains("t")) cfg.sweep_t = to_doubles(sw.at("t"), "sweep.t");
    if (sw.contains("epsilon")) cfg.sweep_eps = to_doubles(sw.at("epsilon"), "sweep.epsilon");
    if (auto v = opt_number(sw, "tol", "sweep")) cfg.implicit_tol = *v;
    if (sw.contains("parallel")) {
      if (!sw.at("parallel").is_boolean()) fail("sweep.parallel", "expected a boolean");
      cfg.parallel = sw.at("parallel").get<bool>();
    }
    if (sw.contains("error")) {
      const json& e = sw.at("error");
      if (auto v = opt_number(e, "coefficient", "sweep.error")) cfg.implicit_error.coefficient = *v;
      if (auto v = opt_number(e, "power", "sweep.error")) cfg.implicit_error.power = *v;
      cfg.implicit_direction = parse_direction(e, "sweep.error", seed);
    }
  }

  validate_experiment(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": parse error: " + e.what());
  }
  return parse_config(j, ov);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << to_json(cfg).dump(2) << '\n';
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json(a) == to_json(b);
}

std::uint64_t problem_hash(const ExperimentConfig& cfg) {
  json j{{"problem", problem_json(cfg.problem)}};
  j["reference"] = cfg.reference ? vec_json(*cfg.reference) : json("oracle");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace vip
