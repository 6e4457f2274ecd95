#include "casimir/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "casimir/assembly.hpp"
#include "casimir/errors.hpp"
#include "casimir/presets.hpp"

namespace casimir {

namespace {

std::string fmt(double x, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string axis_name(Axis a) { return a == Axis::X ? "x" : a == Axis::Y ? "y" : "z"; }

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') c = ' ';
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void RunPlan::validate() const {
  if (geometry_path.empty()) throw std::invalid_argument("--geometry is required");
  quad.validate();
  if (integration.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  if (mode == RunMode::Sweep) {
    if (translate.has_value() == rotate.has_value()) {
      throw std::invalid_argument("a sweep needs exactly one of a translation or a rotation grid");
    }
    if (translate) {
      if (translate->steps < 1) throw std::invalid_argument("sweep steps must be >= 1");
      if (!std::isfinite(translate->from) || !std::isfinite(translate->to)) {
        throw std::invalid_argument("sweep range must be finite");
      }
    }
    if (rotate) {
      if (rotate->theta_steps < 1 || rotate->phi_steps < 1) throw std::invalid_argument("sweep steps must be >= 1");
      for (double v : {rotate->theta_from, rotate->theta_to, rotate->phi_from, rotate->phi_to}) {
        if (!std::isfinite(v)) throw std::invalid_argument("sweep range must be finite");
      }
    }
  }
}

std::vector<double> linspace(double from, double to, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (steps == 1) return {from};
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) v.push_back(from + (to - from) * i / (steps - 1));
  v.back() = to;
  return v;
}

CsvWriter::CsvWriter(std::ostream& out) : out_(out) { out_ << kCsvHeader << '\n' << std::flush; }

void CsvWriter::write(const SweepResult& r) {
  const bool ok = r.status == "ok";
  out_ << csv_field(r.param_name) << ',' << csv_field(r.param_value) << ',' << (ok ? fmt(r.energy) : "nan") << ','
       << (r.force && ok ? fmt(*r.force) : "") << ',' << (r.error_estimate ? fmt(*r.error_estimate) : "") << ','
       << r.n_basis << ',' << fmt(r.wall_seconds, 6) << ',' << csv_field(r.status) << '\n'
       << std::flush;
}

int run_points(const std::vector<SweepPoint>& points, const std::optional<std::string>& force_object,
               const Vec3& direction, const QuadratureSpec& quad, const IntegrationOptions& opts, CsvWriter& csv,
               std::ostream& log, std::vector<SweepResult>* results) {
  int failed = 0;
  for (const auto& p : points) {
    SweepResult r;
    try {
      const Configuration config = p.build();
      if (force_object) {
        r = integrate_force(config, config.index_of(*force_object), quad, opts, direction);
      } else {
        r = integrate_energy(config, quad, opts);
      }
    } catch (const std::exception& e) {
      r = SweepResult{};
      r.status = std::string("error: ") + e.what();
      ++failed;
      log << "casimir: " << p.param_name << "=" << p.param_value << ": " << e.what() << '\n';
    }
    r.param_name = p.param_name;
    r.param_value = p.param_value;
    csv.write(r);
    if (results) results->push_back(std::move(r));
  }
  return failed;
}

namespace {

Vec3 bbox_center(const TriangleMesh& m) {
  return 0.5 * (m.bbox_min() + m.bbox_max());
}

void dump_matrix_at_scale(const Configuration& config, const QuadratureSpec& quad, const std::string& path,
                          std::ostream& log) {
  const double k0 = resolve_kappa_scale(config, quad);
  write_matrix(path, assemble(config, k0, quad));
  log << "casimir: wrote M(kappa=" << fmt(k0, 6) << ") to " << path << '\n';
}

int run_with_output(const RunPlan& plan, const std::function<int(CsvWriter&)>& body) {
  if (plan.out_path.empty()) {
    CsvWriter csv(std::cout);
    return body(csv);
  }
  std::ofstream file(plan.out_path);
  if (!file) throw std::runtime_error("cannot write '" + plan.out_path + "'");
  CsvWriter csv(file);
  return body(csv);
}

}  // namespace

int run_plan(const RunPlan& plan, std::ostream& log) {
  try {
    plan.validate();
    const Configuration config = read_geometry_file(plan.geometry_path);
    const Vec3 dir = axis_vector(plan.direction);
    if (!plan.dump_matrix.empty()) dump_matrix_at_scale(config, plan.quad, plan.dump_matrix, log);

    std::optional<std::string> force_object;
    if (!plan.object.empty()) {
      config.index_of(plan.object);
      force_object = plan.object;
    } else if (plan.mode == RunMode::Force) {
      force_object = config.object(config.object_count() - 1).label();
    }

    std::vector<SweepPoint> points;
    if (plan.mode != RunMode::Sweep) {
      points.push_back({plan.mode == RunMode::Force ? "force" : "energy", "", [&] { return config; }});
    } else if (plan.translate) {
      const TranslateSweep& t = *plan.translate;
      const int idx = config.index_of(t.object);
      for (double v : linspace(t.from, t.to, t.steps)) {
        points.push_back({t.object + "." + axis_name(t.axis), fmt(v, 12), [&config, idx, v, ax = t.axis] {
                            return config.with_motion(idx, RigidTransform::translate(v * axis_vector(ax)));
                          }});
      }
    } else {
      const RotateSweep& r = *plan.rotate;
      const int idx = config.index_of(r.object);
      const Vec3 pivot = r.pivot.value_or(bbox_center(config.object(idx).placed()));
      for (double theta : linspace(r.theta_from, r.theta_to, r.theta_steps)) {
        for (double phi : linspace(r.phi_from, r.phi_to, r.phi_steps)) {
          points.push_back({"theta_phi_deg", fmt(theta, 12) + ";" + fmt(phi, 12), [&config, idx, theta, phi, pivot] {
                              return config.with_motion(idx, orientation_rotation(theta, phi, pivot));
                            }});
        }
      }
    }

    return run_with_output(plan, [&](CsvWriter& csv) {
      const int failed = run_points(points, force_object, dir, plan.quad, plan.integration, csv, log);
      return failed ? 1 : 0;
    });
  } catch (const std::exception& e) {
    log << "casimir: " << e.what() << '\n';
    return 1;
  }
}

namespace {

struct PresetContext {
  std::filesystem::path dir;
  QuadratureSpec quad;
  IntegrationOptions opts;
  std::ostream& log;
  int failed = 0;

  std::vector<SweepResult> run(const std::string& file, const std::vector<SweepPoint>& points,
                               const std::optional<std::string>& force_object) {
    const auto path = dir / file;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    CsvWriter csv(out);
    std::vector<SweepResult> results;
    failed += run_points(points, force_object, Vec3::UnitZ(), quad, opts, csv, log, &results);
    log << "casimir: wrote " << path.string() << '\n';
    return results;
  }
};

void preset_fig2(PresetContext& ctx, const PresetScale& s, bool fine) {
  const double R = 1.0, L = 6.0;
  const std::vector<double> gaps =
      fine ? std::vector<double>{0.5, 1, 1.5, 2, 3, 4, 5, 6} : std::vector<double>{1, 2, 3, 4, 6};
  std::vector<SweepPoint> spheres, parallel, crossed;
  for (double z : gaps) {
    spheres.push_back({"gap", fmt(z, 12), [=] { return sphere_pair(R, s.sphere_subdivisions, 2 * R + z); }});
    parallel.push_back({"gap", fmt(z, 12), [=] { return capsule_pair(R, L, s.capsule_resolution, z, false); }});
    crossed.push_back({"gap", fmt(z, 12), [=] { return capsule_pair(R, L, s.capsule_resolution, z, true); }});
  }
  ctx.run("fig2_spheres.csv", spheres, std::nullopt);
  ctx.run("fig2_parallel_capsules.csv", parallel, std::nullopt);
  ctx.run("fig2_crossed_capsules.csv", crossed, std::nullopt);
}

void preset_fig3(PresetContext& ctx, const PresetScale& s, bool fine) {
  const double R = 1.0;
  std::vector<double> lengths = fine ? linspace(4, 16, 7) : std::vector<double>{4, 6, 8, 10, 12};
  std::ofstream fit_out(ctx.dir / "fig3_fit.csv");
  fit_out << "Z,a,b,max_residual\n";
  for (double Z : {2.0, 4.0}) {
    std::vector<SweepPoint> points;
    for (double L : lengths) {
      points.push_back({"length", fmt(L, 12), [=] { return capsule_pair(R, L, s.capsule_resolution, Z, true); }});
    }
    const auto results = ctx.run("fig3_Z" + fmt(Z, 3) + ".csv", points, std::string("upper"));
    std::vector<double> xs, ys;
    for (size_t i = results.size() >= 3 ? results.size() - 3 : 0; i < results.size(); ++i) {
      if (results[i].status != "ok" || !results[i].force) continue;
      xs.push_back(lengths[i]);
      ys.push_back(*results[i].force);
    }
    if (xs.size() >= 2) {
      const InverseFit f = fit_inverse(xs, ys);
      fit_out << fmt(Z, 6) << ',' << fmt(f.a) << ',' << fmt(f.b) << ',' << fmt(f.max_residual) << '\n';
      ctx.log << "casimir: Z=" << Z << " large-L fit F = " << fmt(f.a, 6) << " + " << fmt(f.b, 6) << "/L\n";
    }
  }
}

void preset_fig4(PresetContext& ctx, const PresetScale& s, bool fine) {
  const double L = 1.0, D = 2.0 * L;
  const int n = fine ? 13 : 7;
  std::vector<SweepPoint> points;
  for (double theta : linspace(-60, 60, n)) {
    for (double phi : linspace(0, 120, n)) {
      points.push_back({"theta_phi_deg", fmt(theta, 12) + ";" + fmt(phi, 12),
                        [=] { return tetrahedron_pair(L, s.tetrahedron_subdivisions, D, theta, phi); }});
    }
  }
  const auto results = ctx.run("fig4.csv", points, std::nullopt);
  size_t best = results.size();
  for (size_t i = 0; i < results.size(); ++i) {
    if (results[i].status != "ok") continue;
    if (best == results.size() || results[i].energy < results[best].energy) best = i;
  }
  if (best < results.size()) ctx.log << "casimir: fig4 minimum at (theta;phi) = " << results[best].param_value << '\n';
}

}  // namespace

int run_preset(const std::string& name, const std::string& scale, const std::string& out_dir,
               const QuadratureSpec& quad, const IntegrationOptions& opts, std::ostream& log) {
  try {
    const PresetScale s = preset_scale(scale);
    const bool fine = scale == "fine";
    std::filesystem::create_directories(out_dir);
    PresetContext ctx{out_dir, quad, opts, log};
    if (name == "fig2") {
      preset_fig2(ctx, s, fine);
    } else if (name == "fig3") {
      preset_fig3(ctx, s, fine);
    } else if (name == "fig4") {
      preset_fig4(ctx, s, fine);
    } else {
      throw std::invalid_argument("unknown preset '" + name + "' (expected fig2, fig3 or fig4)");
    }
    return ctx.failed ? 1 : 0;
  } catch (const std::exception& e) {
    log << "casimir: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace casimir
