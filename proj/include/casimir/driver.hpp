#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/kappa_integration.hpp"

namespace casimir {

enum class RunMode { Energy, Force, Sweep };

/// Moves one object along an axis: displacement from `from` to `to` in
/// `steps` equal steps, relative to the placement in the geometry file.
struct TranslateSweep {
  std::string object;
  Axis axis = Axis::Z;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
};

/// Orientation grid: phi about z, then theta about y, around `pivot`
/// (default: center of the object's bounding box). Angles in degrees.
struct RotateSweep {
  std::string object;
  double theta_from = 0.0, theta_to = 0.0;
  int theta_steps = 1;
  double phi_from = 0.0, phi_to = 0.0;
  int phi_steps = 1;
  std::optional<Vec3> pivot;
};

struct RunPlan {
  RunMode mode = RunMode::Energy;
  std::string geometry_path;
  /// Force target. Force mode defaults to the last object; sweeps compute a
  /// force only when this is set.
  std::string object;
  Axis direction = Axis::Z;
  QuadratureSpec quad;
  IntegrationOptions integration;
  std::string out_path;  // empty: standard output
  std::string dump_matrix;
  std::optional<TranslateSweep> translate;
  std::optional<RotateSweep> rotate;

  void validate() const;  // throws std::invalid_argument
};

/// `steps` evenly spaced values from `from` to `to` inclusive; {from} when steps == 1.
std::vector<double> linspace(double from, double to, int steps);

inline constexpr const char* kCsvHeader =
    "param_name,param_value,energy_hbar_c_per_l,force_hbar_c_per_l2,error_estimate,N_basis,wall_seconds,status";

/// Writes the header on construction and flushes after every row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out);
  void write(const SweepResult& r);

 private:
  std::ostream& out_;
};

/// One row of a sweep: a label and a configuration factory. Factories may
/// throw (e.g. overlapping objects); the row is then reported as failed.
struct SweepPoint {
  std::string param_name;
  std::string param_value;
  std::function<Configuration()> build;
};

/// Runs the points in order and writes one CSV row each. Returns the number
/// of failed points. Force is computed on `force_object` when it is set.
int run_points(const std::vector<SweepPoint>& points, const std::optional<std::string>& force_object,
               const Vec3& direction, const QuadratureSpec& quad, const IntegrationOptions& opts, CsvWriter& csv,
               std::ostream& log, std::vector<SweepResult>* results = nullptr);

/// Executes a plan; returns the process exit status (0 ok, 1 failure).
int run_plan(const RunPlan& plan, std::ostream& log);

/// Canned sweeps for the three result figures. Writes CSV files into
/// `out_dir` (created if needed); returns the exit status.
int run_preset(const std::string& name, const std::string& scale, const std::string& out_dir,
               const QuadratureSpec& quad, const IntegrationOptions& opts, std::ostream& log);

}  // namespace casimir
