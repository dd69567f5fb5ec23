#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "optdes/christoffel.hpp"
#include "optdes/gallery.hpp"
#include "optdes/problem_io.hpp"
#include "optdes/render.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRecovery = 3;
constexpr int kExitSolver = 4;

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw optdes::Error("cannot write '" + path + "'");
  out << text;
}

void print_summary(const optdes::Report& report) {
  std::cout << "status: " << report.status
            << "  objective: " << report.objective
            << "  lambda*: " << report.lambda_star << " (expected "
            << report.lambda_star_expected << ")\n";
  if (report.recovered) {
    std::cout << "atoms: " << report.design.size() << "  method: "
              << report.method << "  flat: r=" << report.flatness.r
              << " ranks " << report.flatness.rank_high << "/"
              << report.flatness.rank_low
              << "  moment residual: " << report.verification.moment_residual
              << "\n";
    if (!report.fallback_note.empty()) {
      std::cout << "note: " << report.fallback_note << "\n";
    }
  }
}

struct CommonFlags {
  std::optional<int> d;
  std::optional<int> delta;
  std::optional<int> r_max;
  std::optional<std::string> method;
  std::optional<double> rank_tol;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(optdes::DesignProblem& problem, const CommonFlags& flags) {
  if (flags.d) problem.d = *flags.d;
  if (flags.delta) problem.delta = *flags.delta;
  if (flags.r_max) problem.recovery.r_max = *flags.r_max;
  if (flags.method) {
    problem.recovery.method = optdes::recovery_method_from_string(*flags.method);
  }
  if (flags.rank_tol) problem.recovery.rank_tol = *flags.rank_tol;
  if (flags.seed) problem.recovery.seed = *flags.seed;
}

int run_solve(const std::string& input, const CommonFlags& flags,
              std::optional<std::string> out) {
  optdes::DesignProblem problem = optdes::load_problem(input);
  apply_overrides(problem, flags);
  optdes::SolveArtifacts step1 = optdes::run_step1(problem);
  if (step1.solution.status != optdes::SolveStatus::Optimal) {
    std::cerr << "solver did not reach optimality: "
              << optdes::to_string(step1.solution.status) << "\n";
    optdes::write_json(
        optdes::report_to_json(optdes::make_report(problem, step1)),
        out.value_or(std::filesystem::path(input).stem().string() +
                     "_report.json"));
    return kExitSolver;
  }
  optdes::Report report = optdes::make_report(problem, step1);
  const std::string path = out.value_or(
      std::filesystem::path(input).stem().string() + "_report.json");
  optdes::write_json(optdes::report_to_json(report), path);
  print_summary(report);
  std::cout << "report written to " << path << "\n";
  return kExitOk;
}

int run_recover(const std::string& input, const CommonFlags& flags,
                std::optional<std::string> out) {
  optdes::Report report = optdes::load_report(input);
  apply_overrides(report.problem, flags);
  optdes::SolveArtifacts step1 = optdes::artifacts_from_report(report);
  optdes::RecoverArtifacts step2 = optdes::run_step2(report.problem, step1);
  optdes::attach_recovery(report, step2);
  const std::string path = out.value_or(input);
  optdes::write_json(optdes::report_to_json(report), path);
  print_summary(report);
  std::cout << "report written to " << path << "\n";
  return kExitOk;
}

int run_demo(const std::string& name, const CommonFlags& flags,
             std::optional<std::string> out_prefix) {
  auto maybe = optdes::gallery_problem(name, flags.d, flags.delta);
  if (!maybe) {
    throw optdes::ParseError("unknown demo '" + name +
                             "' (try interval, polygon, sphere)");
  }
  optdes::DesignProblem problem = *maybe;
  apply_overrides(problem, flags);
  const std::string prefix = out_prefix.value_or(
      name + "_d" + std::to_string(problem.d) + "_delta" +
      std::to_string(problem.delta));

  optdes::SolveArtifacts step1 = optdes::run_step1(problem);
  if (step1.solution.status != optdes::SolveStatus::Optimal) {
    std::cerr << "solver did not reach optimality: "
              << optdes::to_string(step1.solution.status) << "\n";
    return kExitSolver;
  }
  optdes::RecoverArtifacts step2 = optdes::run_step2(problem, step1);
  optdes::Report report = optdes::make_report(problem, step1);
  optdes::attach_recovery(report, step2);
  optdes::write_json(optdes::report_to_json(report), prefix + ".json");
  print_summary(report);

  if (problem.X.dim() <= 2) {
    write_text(optdes::render_design_svg(problem.X, step2.result.design,
                                         step1.y_star, problem.d),
               prefix + ".svg");
    std::cout << "plot written to " << prefix << ".svg\n";
  } else {
    write_text(optdes::atoms_csv(step2.result.design), prefix + "_atoms.csv");
    std::cout << "atoms written to " << prefix << "_atoms.csv\n";
  }
  std::cout << "report written to " << prefix << ".json\n";
  return kExitOk;
}

int run_levelset(const std::string& input, int grid,
                 std::optional<std::string> out,
                 std::optional<std::string> svg) {
  optdes::Report report = optdes::load_report(input);
  optdes::GridSpec spec;
  spec.points_per_axis = grid;
  const auto samples = optdes::levelset_samples(
      report.y_star, report.problem.d, report.problem.X, spec);
  const std::string path = out.value_or(
      std::filesystem::path(input).stem().string() + "_levelset.csv");
  write_text(optdes::levelset_csv(samples), path);
  std::cout << "levelset table written to " << path << " (" << samples.size()
            << " rows)\n";
  if (svg && report.recovered) {
    write_text(optdes::render_design_svg(report.problem.X, report.design,
                                         report.y_star, report.problem.d),
               *svg);
    std::cout << "plot written to " << *svg << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate D-optimal designs on semialgebraic sets via "
               "moment relaxations"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input, demo_name = "interval";
  std::optional<std::string> out, svg_out;
  int grid = 101;

  auto add_common = [&](CLI::App* cmd, bool with_delta = true) {
    cmd->add_option("--d", flags.d, "regression degree override");
    if (with_delta) {
      cmd->add_option("--delta", flags.delta, "relaxation increment override");
    }
    cmd->add_option("--r-max", flags.r_max, "max recovery increment");
    cmd->add_option("--method", flags.method,
                    "nie | christoffel-levelset | christoffel-trace");
    cmd->add_option("--rank-tol", flags.rank_tol, "relative rank tolerance");
    cmd->add_option("--seed", flags.seed, "extraction seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "step one: optimal moments");
  solve->add_option("problem", input, "problem JSON file")->required();
  add_common(solve);
  solve->add_option("--out", out, "report output path");

  CLI::App* recover =
      app.add_subcommand("recover", "step two: atoms and weights");
  recover->add_option("report", input, "report JSON from solve")->required();
  add_common(recover);
  recover->add_option("--out", out, "report output path");

  CLI::App* demo = app.add_subcommand("demo", "run a built-in example");
  demo->add_option("name", demo_name, "interval | polygon | sphere")
      ->required();
  add_common(demo);
  demo->add_option("--out", out, "output prefix");

  CLI::App* levelset =
      app.add_subcommand("levelset", "christoffel level-set table");
  levelset->add_option("report", input, "report JSON")->required();
  levelset->add_option("--grid", grid, "points per axis");
  levelset->add_option("--out", out, "CSV output path");
  levelset->add_option("--svg", svg_out, "also render an SVG");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return run_solve(input, flags, out);
    if (recover->parsed()) return run_recover(input, flags, out);
    if (demo->parsed()) return run_demo(demo_name, flags, out);
    if (levelset->parsed()) return run_levelset(input, grid, out, svg_out);
    return kExitInput;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  } catch (const optdes::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const optdes::MissingBallCertificate& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const optdes::NotFlat& e) {
    std::cerr << "recovery failed: " << e.what()
              << "\nhint: raise --r-max or loosen --rank-tol\n";
    return kExitRecovery;
  } catch (const optdes::ExtractionFailed& e) {
    std::cerr << "recovery failed: " << e.what() << "\n";
    return kExitRecovery;
  } catch (const optdes::EchelonFailure& e) {
    std::cerr << "recovery failed: " << e.what() << "\n";
    return kExitRecovery;
  } catch (const optdes::BadFit& e) {
    std::cerr << "recovery failed: " << e.what() << "\n";
    return kExitRecovery;
  } catch (const optdes::NegativeWeight& e) {
    std::cerr << "recovery failed: " << e.what() << "\n";
    return kExitRecovery;
  } catch (const optdes::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}
