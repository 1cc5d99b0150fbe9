#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "liftham/cli.hpp"

namespace {

int fail_invalid(const std::string& message) {
  nlohmann::ordered_json j{{"error", "invalid_arguments"}, {"message", message}};
  std::cerr << j.dump(2) << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  liftham::RunSpec spec;
  std::string config_path;

  CLI::App app{"lifted time-dependent complex Hamiltonian systems: derivation, lifting, integration"};
  app.require_subcommand(1);
  app.add_option("--config", config_path,
                 "JSON file supplying defaults for any flag not given on the command line");

  auto add_chart = [&](CLI::App* c) {
    c->fallthrough();  // lets --config appear after the subcommand name
    c->add_option("--m", spec.m, "complex fiber dimension (>= 1)");
    c->add_option("--k", spec.k, "extension order (>= 0)");
    c->add_option("--kind", spec.kind, "vertical | complete");
    c->add_option("--format", spec.format, "json | csv");
  };

  CLI::App* lift = app.add_subcommand("lift", "lift a function, vector field, or one-form onto the order-k chart");
  add_chart(lift);
  lift->add_option("--object", spec.object, "function | field | form");
  lift->add_option("--expr", spec.expr, "expression to lift (object=function)");
  lift->add_option("--components", spec.components,
                   "comma-separated name=expr base components (object=field|form); t defaults to 1");
  lift->add_option("--out", spec.out, "write the document here instead of stdout");

  CLI::App* derive = app.add_subcommand("derive", "derive the order-k Hamiltonian equations for H");
  add_chart(derive);
  derive->add_option("--H", spec.hamiltonian, "Hamiltonian on t and the level-0 coordinates");
  derive->add_option("--out", spec.out, "write the document here instead of stdout");

  CLI::App* integrate =
      app.add_subcommand("integrate", "integrate the derived flow and write a trajectory CSV");
  add_chart(integrate);
  integrate->add_option("--H", spec.hamiltonian, "Hamiltonian on t and the level-0 coordinates");
  integrate->add_option("--init", spec.init,
                        "comma-separated name=value initial conditions; every fiber coordinate must appear");
  integrate->add_option("--dt", spec.dt, "step size (> 0)");
  integrate->add_option("--t-start", spec.t_start, "initial time");
  integrate->add_option("--t-end", spec.t_end, "final time (>= t-start)");
  integrate->add_option("--method", spec.method, "rk4 | euler");
  integrate->add_option("--out", spec.out, "trajectory CSV path (required)");

  CLI::App* check = app.add_subcommand("check", "run the deterministic invariant suite at (m, k)");
  add_chart(check);
  check->add_option("--out", spec.out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_invalid(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  spec.command = sub->get_name();

  if (!config_path.empty()) {
    std::ifstream ifs(config_path);
    if (!ifs) {
      nlohmann::ordered_json j{{"error", "io_error"},
                               {"message", "cannot open config '" + config_path + "'"}};
      std::cerr << j.dump(2) << '\n';
      return 1;
    }
    nlohmann::json cfg;
    try {
      ifs >> cfg;
      auto merge = [&](const char* flag, const char* key, auto& field) {
        auto* opt = sub->get_option_no_throw(flag);
        if (!opt || opt->count() > 0 || !cfg.contains(key)) return;
        cfg.at(key).get_to(field);
      };
      merge("--m", "m", spec.m);
      merge("--k", "k", spec.k);
      merge("--kind", "kind", spec.kind);
      merge("--H", "H", spec.hamiltonian);
      merge("--object", "object", spec.object);
      merge("--expr", "expr", spec.expr);
      merge("--components", "components", spec.components);
      merge("--init", "init", spec.init);
      merge("--dt", "dt", spec.dt);
      merge("--t-start", "t_start", spec.t_start);
      merge("--t-end", "t_end", spec.t_end);
      merge("--method", "method", spec.method);
      merge("--out", "out", spec.out);
      merge("--format", "format", spec.format);
    } catch (const nlohmann::json::exception& e) {
      return fail_invalid("config '" + config_path + "': " + e.what());
    }
  }

  return liftham::run(spec, std::cout, std::cerr);
}
