#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "casimir/driver.hpp"
#include "casimir/parallel.hpp"

using namespace casimir;

namespace {

struct CommonFlags {
  std::string geometry;
  std::string object;
  std::string direction = "z";
  int xi_points = 24;
  double kappa_scale = 0.0;
  int workers = default_workers();
  std::string out;
  std::string dump_matrix;
  bool error_estimate = false;
};

void add_quadrature_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--xi-points", f.xi_points, "Gauss-Legendre points for the kappa integral")
      ->check(CLI::Range(4, 1000));
  app->add_option("--kappa-scale", f.kappa_scale, "kappa_0 of the kappa mapping (default 1/d_min)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--workers", f.workers, "concurrent kappa samples (1 = reproducibility mode)")
      ->check(CLI::PositiveNumber);
  app->add_flag("--error-estimate", f.error_estimate, "re-run on an independent n/2-point rule");
}

void add_run_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--geometry", f.geometry, "geometry file")->required()->check(CLI::ExistingFile);
  app->add_option("--object", f.object, "force target label");
  app->add_option("--direction", f.direction, "force direction")->check(CLI::IsMember({"x", "y", "z"}));
  app->add_option("--out", f.out, "CSV output path (default: stdout)");
  app->add_option("--dump-matrix", f.dump_matrix, "write M(kappa_0) as plain text");
  add_quadrature_flags(app, f);
}

RunPlan make_plan(RunMode mode, const CommonFlags& f) {
  RunPlan p;
  p.mode = mode;
  p.geometry_path = f.geometry;
  p.object = f.object;
  p.direction = parse_axis(f.direction);
  p.quad.n_points = f.xi_points;
  p.quad.kappa_scale = f.kappa_scale;
  p.integration.workers = f.workers;
  p.integration.error_estimate = f.error_estimate;
  p.out_path = f.out;
  p.dump_matrix = f.dump_matrix;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energies and forces between perfectly conducting objects"};
  app.require_subcommand(1);

  CommonFlags energy_flags, force_flags, sweep_flags, preset_flags;
  auto* energy = app.add_subcommand("energy", "Casimir energy of a configuration");
  add_run_flags(energy, energy_flags);
  auto* force = app.add_subcommand("force", "force on one object (default: the last one)");
  add_run_flags(force, force_flags);

  auto* sweep = app.add_subcommand("sweep", "energy (and force with --object) over a translation or rotation grid");
  add_run_flags(sweep, sweep_flags);
  std::string sweep_target, sweep_axis = "z";
  std::vector<double> translate_range, theta_range, phi_range, pivot;
  sweep->add_option("--move", sweep_target, "object to translate or rotate")->required();
  sweep->add_option("--axis", sweep_axis, "translation axis")->check(CLI::IsMember({"x", "y", "z"}));
  auto* tr = sweep->add_option("--translate", translate_range, "FROM TO STEPS")->expected(3);
  auto* th = sweep->add_option("--theta", theta_range, "FROM TO STEPS (degrees)")->expected(3);
  auto* ph = sweep->add_option("--phi", phi_range, "FROM TO STEPS (degrees)")->expected(3);
  sweep->add_option("--pivot", pivot, "rotation origin X Y Z")->expected(3);
  tr->excludes(th);
  tr->excludes(ph);

  auto* preset = app.add_subcommand("preset", "canned sweeps for the result figures");
  std::string preset_name, preset_scale = "coarse", preset_dir = "results";
  preset->add_option("name", preset_name, "fig2, fig3 or fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  preset->add_option("--scale", preset_scale, "mesh sizes")->check(CLI::IsMember({"coarse", "fine"}));
  preset->add_option("--out", preset_dir, "output directory");
  add_quadrature_flags(preset, preset_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (energy->parsed()) return run_plan(make_plan(RunMode::Energy, energy_flags), std::cerr);
    if (force->parsed()) return run_plan(make_plan(RunMode::Force, force_flags), std::cerr);
    if (sweep->parsed()) {
      RunPlan p = make_plan(RunMode::Sweep, sweep_flags);
      auto steps = [](double v) {
        if (v != static_cast<int>(v)) throw std::invalid_argument("STEPS must be an integer");
        return static_cast<int>(v);
      };
      if (!translate_range.empty()) {
        p.translate = TranslateSweep{sweep_target, parse_axis(sweep_axis), translate_range[0], translate_range[1],
                                     steps(translate_range[2])};
      } else {
        RotateSweep r;
        r.object = sweep_target;
        if (!theta_range.empty()) {
          r.theta_from = theta_range[0];
          r.theta_to = theta_range[1];
          r.theta_steps = steps(theta_range[2]);
        }
        if (!phi_range.empty()) {
          r.phi_from = phi_range[0];
          r.phi_to = phi_range[1];
          r.phi_steps = steps(phi_range[2]);
        }
        if (theta_range.empty() && phi_range.empty()) {
          std::cerr << "casimir: sweep needs --translate or --theta/--phi\n";
          return 1;
        }
        if (!pivot.empty()) r.pivot = Vec3(pivot[0], pivot[1], pivot[2]);
        p.rotate = r;
      }
      return run_plan(p, std::cerr);
    }
    if (preset->parsed()) {
      QuadratureSpec q;
      q.n_points = preset_flags.xi_points;
      q.kappa_scale = preset_flags.kappa_scale;
      IntegrationOptions o;
      o.workers = preset_flags.workers;
      o.error_estimate = preset_flags.error_estimate;
      return run_preset(preset_name, preset_scale, preset_dir, q, o, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "casimir: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
