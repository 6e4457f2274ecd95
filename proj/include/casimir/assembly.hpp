#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "casimir/geometry.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Dense matrix over the concatenated RWG bases of a configuration, with the
/// (offset, size) of each object's block.
class BlockMatrix {
 public:
  Eigen::MatrixXd values;
  std::vector<int> offsets;
  std::vector<int> sizes;
  double kappa = 0.0;

  int dimension() const { return static_cast<int>(values.rows()); }
  int block_count() const { return static_cast<int>(offsets.size()); }
  auto block(int i, int j) {
    return values.block(offsets[static_cast<size_t>(i)], offsets[static_cast<size_t>(j)],
                        sizes[static_cast<size_t>(i)], sizes[static_cast<size_t>(j)]);
  }
  auto block(int i, int j) const {
    return values.block(offsets[static_cast<size_t>(i)], offsets[static_cast<size_t>(j)],
                        sizes[static_cast<size_t>(i)], sizes[static_cast<size_t>(j)]);
  }
  /// max |A_ab - A_ba| / max |A_ab| (0 for the zero matrix).
  double symmetry_defect() const;
};

/// M(kappa). For the infinite-separation variant every inter-object block is
/// exactly zero. `scale` records uniform rescalings applied since assembly.
class InteractionMatrix : public BlockMatrix {
 public:
  bool infinite_separation = false;
  double scale = 1.0;

  /// Multiplies every entry by c > 0. Log-determinant ratios are unchanged.
  InteractionMatrix scaled(double c) const;
};

/// dM/d(delta) for a rigid displacement of one object along `direction`.
/// Only the blocks coupling that object to the others are non-zero.
class MatrixDerivative : public BlockMatrix {
 public:
  int object = 0;
  Vec3 direction = Vec3::UnitZ();
};

struct AssemblyOptions {
  int workers = 1;
  int max_dimension = 6000;
};

InteractionMatrix assemble(const Configuration& config, double kappa, const QuadratureSpec& quad,
                           const AssemblyOptions& opts = {});

InteractionMatrix assemble_inf(const Configuration& config, double kappa, const QuadratureSpec& quad,
                               const AssemblyOptions& opts = {});

/// M and M_inf from one pass; the self blocks are computed once and shared.
std::pair<InteractionMatrix, InteractionMatrix> assemble_with_inf(const Configuration& config, double kappa,
                                                                  const QuadratureSpec& quad,
                                                                  const AssemblyOptions& opts = {});

MatrixDerivative assemble_dz(const Configuration& config, int object, double kappa, const QuadratureSpec& quad,
                             const AssemblyOptions& opts = {}, const Vec3& direction = Vec3::UnitZ());

/// M and dM/d(delta) from one pass over the kernel samples.
std::pair<InteractionMatrix, MatrixDerivative> assemble_with_derivative(const Configuration& config, int object,
                                                                        double kappa, const QuadratureSpec& quad,
                                                                        const AssemblyOptions& opts = {},
                                                                        const Vec3& direction = Vec3::UnitZ());

/// Row-major plain text, 17 significant digits, one row per line.
void write_matrix(const std::string& path, const BlockMatrix& m);

}  // namespace casimir
