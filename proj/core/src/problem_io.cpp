#include "optdes/problem_io.hpp"

#include <fstream>

namespace optdes {

namespace {

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ParseError("missing field '" + field + "'");
  }
  return *it;
}

int require_int(const json& j, const std::string& field, int min_value) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) {
    throw ParseError("field '" + field + "' must be an integer");
  }
  const int value = v.get<int>();
  if (value < min_value) {
    throw ParseError("field '" + field + "' must be >= " +
                     std::to_string(min_value));
  }
  return value;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError("field '" + field + "' must hold numbers");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json moments_to_json(const MomentSequence& y) {
  return json{{"n", y.dim()}, {"order", y.order()},
              {"values", vector_to_json(y.values())}};
}

MomentSequence moments_from_json(const json& j, const std::string& field) {
  const int n = require_int(j, "n", 1);
  const int order = require_int(j, "order", 0);
  Eigen::VectorXd values = vector_from_json(require(j, "values"), field);
  return MomentSequence(n, order, std::move(values));
}

Polynomial polynomial_from_terms(const json& terms, int n,
                                 const std::string& field) {
  if (!terms.is_array() || terms.empty()) {
    throw ParseError("field '" + field + "' must be a nonempty array");
  }
  Polynomial g(n);
  for (const json& term : terms) {
    const json& exps = require(term, "exponents");
    if (!exps.is_array() || static_cast<int>(exps.size()) != n) {
      throw ParseError("field '" + field +
                       ".exponents' must list one exponent per variable");
    }
    std::vector<int> e;
    for (const json& v : exps) {
      if (!v.is_number_integer() || v.get<int>() < 0) {
        throw ParseError("field '" + field + ".exponents' must be >= 0");
      }
      e.push_back(v.get<int>());
    }
    const json& coeff = require(term, "coefficient");
    if (!coeff.is_number()) {
      throw ParseError("field '" + field + ".coefficient' must be a number");
    }
    g.add_term(MultiIndex(std::move(e)), coeff.get<double>());
  }
  return g;
}

json polynomial_to_terms(const Polynomial& g) {
  json terms = json::array();
  for (const auto& [alpha, c] : g.terms()) {
    terms.push_back(json{{"exponents", alpha.exponents()}, {"coefficient", c}});
  }
  return terms;
}

SamplingHook hook_from_string(const std::string& name) {
  if (name == "ball") return SamplingHook::Ball;
  if (name == "sphere-normalized") return SamplingHook::SphereNormalized;
  throw ParseError("field 'sampling.hook' must be 'ball' or "
                   "'sphere-normalized', got '" + name + "'");
}

std::string hook_to_string(SamplingHook hook) {
  return hook == SamplingHook::Ball ? "ball" : "sphere-normalized";
}

}  // namespace

DesignProblem problem_from_json(const json& j) {
  DesignProblem problem;
  problem.name = j.value("name", "");
  const int n = require_int(j, "n", 1);
  problem.d = require_int(j, "d", 1);
  problem.delta = require_int(j, "delta", 0);
  problem.X = SemiAlgebraicSet(n);
  const json& constraints = require(j, "constraints");
  if (!constraints.is_array() || constraints.empty()) {
    throw ParseError("field 'constraints' must be a nonempty array");
  }
  for (size_t c = 0; c < constraints.size(); ++c) {
    const std::string field = "constraints[" + std::to_string(c) + "]";
    const json& cj = constraints[c];
    Polynomial g = polynomial_from_terms(require(cj, "terms"), n, field);
    if (cj.value("equality", false)) {
      problem.X.add_equality(std::move(g));
    } else {
      problem.X.add_inequality(std::move(g));
    }
  }
  if (auto it = j.find("sampling"); it != j.end()) {
    const json& s = *it;
    if (s.contains("hook")) {
      problem.sampling.hook = hook_from_string(s["hook"].get<std::string>());
    }
    if (s.contains("seed")) problem.sampling.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("count")) problem.sampling.count = require_int(s, "count", 1);
  }
  if (auto it = j.find("recovery"); it != j.end()) {
    const json& r = *it;
    if (r.contains("method")) {
      problem.recovery.method =
          recovery_method_from_string(r["method"].get<std::string>());
    }
    if (r.contains("r_max")) problem.recovery.r_max = require_int(r, "r_max", 1);
    if (r.contains("rank_tol")) {
      problem.recovery.rank_tol = r["rank_tol"].get<double>();
    }
    if (r.contains("seed")) problem.recovery.seed = r["seed"].get<std::uint64_t>();
  }
  return problem;
}

json problem_to_json(const DesignProblem& problem) {
  json constraints = json::array();
  const auto& list = problem.X.constraints();
  for (size_t c = 0; c < list.size(); ++c) {
    if (list[c].equality_partner >= 0) {
      if (list[c].equality_partner > static_cast<int>(c)) {
        constraints.push_back(json{{"terms", polynomial_to_terms(list[c].g)},
                                   {"equality", true}});
      }
      continue;
    }
    constraints.push_back(json{{"terms", polynomial_to_terms(list[c].g)}});
  }
  return json{
      {"name", problem.name},
      {"n", problem.X.dim()},
      {"d", problem.d},
      {"delta", problem.delta},
      {"constraints", constraints},
      {"sampling",
       {{"hook", hook_to_string(problem.sampling.hook)},
        {"seed", problem.sampling.seed},
        {"count", problem.sampling.count}}},
      {"recovery",
       {{"method", to_string(problem.recovery.method)},
        {"r_max", problem.recovery.r_max},
        {"rank_tol", problem.recovery.rank_tol},
        {"seed", problem.recovery.seed}}},
  };
}

DesignProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return problem_from_json(j);
}

Report make_report(const DesignProblem& problem, const SolveArtifacts& step1) {
  Report report;
  report.problem = problem;
  report.status = to_string(step1.solution.status);
  report.objective = step1.solution.objective;
  report.kkt_residual = step1.solution.kkt_residual;
  report.mu_final = step1.solution.mu_final;
  report.outer_iterations = step1.solution.outer_iterations;
  report.newton_iterations = step1.solution.newton_iterations;
  report.lambda_star = step1.kkt.lambda_star;
  report.lambda_star_expected = step1.kkt.lambda_star_expected;
  report.stationarity_residual = step1.kkt.stationarity_residual;
  report.max_complementarity = step1.kkt.max_complementarity;
  report.y_star = step1.y_star;
  report.lifted = step1.solution.y;
  report.snapshot = step1.solution.snapshot;
  report.snapshot_mu = step1.solution.snapshot_mu;
  report.solve_seconds = step1.seconds;
  return report;
}

void attach_recovery(Report& report, const RecoverArtifacts& step2) {
  report.recovered = true;
  report.method = step2.result.method;
  report.fallback_note = step2.fallback_note;
  report.design = step2.result.design;
  report.flatness = step2.result.flatness;
  report.verification = step2.verification;
  report.recovery_objective = step2.result.solution.objective;
  report.moment_residual = step2.result.moment_residual;
  report.recover_seconds = step2.seconds;
}

json report_to_json(const Report& report) {
  json atoms = json::array();
  for (const Eigen::VectorXd& x : report.design.atoms) {
    atoms.push_back(vector_to_json(x));
  }
  json j{
      {"problem", problem_to_json(report.problem)},
      {"solver",
       {{"status", report.status},
        {"objective", report.objective},
        {"kkt_residual", report.kkt_residual},
        {"mu_final", report.mu_final},
        {"outer_iterations", report.outer_iterations},
        {"newton_iterations", report.newton_iterations},
        {"lambda_star", report.lambda_star},
        {"lambda_star_expected", report.lambda_star_expected},
        {"stationarity_residual", report.stationarity_residual},
        {"max_complementarity", report.max_complementarity}}},
      {"moments", moments_to_json(report.y_star)},
      {"lifted_moments", moments_to_json(report.lifted)},
      {"timings",
       {{"solve_seconds", report.solve_seconds},
        {"recover_seconds", report.recover_seconds}}},
  };
  if (report.snapshot) {
    j["snapshot"] = {{"mu", report.snapshot_mu},
                     {"values", vector_to_json(*report.snapshot)}};
  }
  if (report.recovered) {
    j["recovery"] = {
        {"method", report.method},
        {"fallback_note", report.fallback_note},
        {"atoms", atoms},
        {"weights", vector_to_json(report.design.weights)},
        {"objective", report.recovery_objective},
        {"moment_residual", report.moment_residual},
        {"flatness",
         {{"r", report.flatness.r},
          {"rank_high", report.flatness.rank_high},
          {"rank_low", report.flatness.rank_low},
          {"v", report.flatness.v},
          {"flat", report.flatness.flat},
          {"tol", report.flatness.tol_used}}},
        {"verification",
         {{"moment_residual", report.verification.moment_residual},
          {"christoffel_evaluated", report.verification.christoffel_evaluated},
          {"christoffel_contact", report.verification.christoffel_contact},
          {"membership_ok", report.verification.membership_ok},
          {"worst_membership", report.verification.worst_membership},
          {"atom_count", report.verification.atom_count},
          {"count_lower", report.verification.count_lower},
          {"count_upper", report.verification.count_upper},
          {"count_within_bounds", report.verification.count_within_bounds},
          {"objective_evaluated", report.verification.objective_evaluated},
          {"objective_gap", report.verification.objective_gap},
          {"weight_sum_error", report.verification.weight_sum_error},
          {"min_weight", report.verification.min_weight}}},
    };
  }
  return j;
}

Report report_from_json(const json& j) {
  Report report;
  report.problem = problem_from_json(require(j, "problem"));
  const json& solver = require(j, "solver");
  report.status = require(solver, "status").get<std::string>();
  report.objective = require(solver, "objective").get<double>();
  report.kkt_residual = solver.value("kkt_residual", 0.0);
  report.mu_final = solver.value("mu_final", 0.0);
  report.outer_iterations = solver.value("outer_iterations", 0);
  report.newton_iterations = solver.value("newton_iterations", 0);
  report.lambda_star = solver.value("lambda_star", 0.0);
  report.lambda_star_expected = solver.value("lambda_star_expected", 0.0);
  report.stationarity_residual = solver.value("stationarity_residual", 0.0);
  report.max_complementarity = solver.value("max_complementarity", 0.0);
  report.y_star = moments_from_json(require(j, "moments"), "moments.values");
  report.lifted =
      moments_from_json(require(j, "lifted_moments"), "lifted_moments.values");
  if (auto it = j.find("snapshot"); it != j.end()) {
    report.snapshot_mu = it->value("mu", 0.0);
    report.snapshot = vector_from_json(require(*it, "values"), "snapshot.values");
  }
  if (auto it = j.find("timings"); it != j.end()) {
    report.solve_seconds = it->value("solve_seconds", 0.0);
    report.recover_seconds = it->value("recover_seconds", 0.0);
  }
  if (auto it = j.find("recovery"); it != j.end()) {
    const json& r = *it;
    report.recovered = true;
    report.method = r.value("method", "");
    report.fallback_note = r.value("fallback_note", "");
    for (const json& atom : require(r, "atoms")) {
      report.design.atoms.push_back(vector_from_json(atom, "recovery.atoms"));
    }
    report.design.weights =
        vector_from_json(require(r, "weights"), "recovery.weights");
    report.recovery_objective = r.value("objective", 0.0);
    report.moment_residual = r.value("moment_residual", 0.0);
    if (auto f = r.find("flatness"); f != r.end()) {
      report.flatness.r = f->value("r", 0);
      report.flatness.rank_high = f->value("rank_high", 0);
      report.flatness.rank_low = f->value("rank_low", 0);
      report.flatness.v = f->value("v", 1);
      report.flatness.flat = f->value("flat", false);
      report.flatness.tol_used = f->value("tol", 1e-6);
    }
    if (auto v = r.find("verification"); v != r.end()) {
      report.verification.moment_residual = v->value("moment_residual", 0.0);
      report.verification.christoffel_evaluated =
          v->value("christoffel_evaluated", false);
      report.verification.christoffel_contact =
          v->value("christoffel_contact", 0.0);
      report.verification.membership_ok = v->value("membership_ok", false);
      report.verification.worst_membership = v->value("worst_membership", 0.0);
      report.verification.atom_count = v->value("atom_count", 0);
      report.verification.count_lower =
          v->value("count_lower", static_cast<std::int64_t>(0));
      report.verification.count_upper =
          v->value("count_upper", static_cast<std::int64_t>(0));
      report.verification.count_within_bounds =
          v->value("count_within_bounds", false);
      report.verification.objective_evaluated =
          v->value("objective_evaluated", false);
      report.verification.objective_gap = v->value("objective_gap", 0.0);
      report.verification.weight_sum_error = v->value("weight_sum_error", 0.0);
      report.verification.min_weight = v->value("min_weight", 0.0);
    }
  }
  return report;
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return report_from_json(j);
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

SolveArtifacts artifacts_from_report(const Report& report) {
  SolveArtifacts artifacts;
  artifacts.solution.y = report.lifted;
  artifacts.solution.objective = report.objective;
  artifacts.solution.status = report.status == "optimal"
                                  ? SolveStatus::Optimal
                                  : SolveStatus::MaxIterations;
  artifacts.solution.kkt_residual = report.kkt_residual;
  artifacts.solution.mu_final = report.mu_final;
  artifacts.solution.snapshot = report.snapshot;
  artifacts.solution.snapshot_mu = report.snapshot_mu;
  artifacts.kkt.lambda_star = report.lambda_star;
  artifacts.kkt.lambda_star_expected = report.lambda_star_expected;
  artifacts.kkt.stationarity_residual = report.stationarity_residual;
  artifacts.kkt.max_complementarity = report.max_complementarity;
  artifacts.y_star = report.y_star;
  artifacts.seconds = report.solve_seconds;
  return artifacts;
}

}  // namespace optdes
