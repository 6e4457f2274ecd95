#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "casimir/geometry.hpp"
#include "casimir/mesh.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Imaginary wavenumber kappa > 0, in units of 1/length (hbar = c = 1).
struct KernelParams {
  double kappa = 1.0;
  void validate() const;
};

/// e^{-kappa r} / (4 pi r). Throws NumericalError for r <= 0.
double scalar_green(double kappa, double r);

/// d/d(delta) of g(|x + delta * dir - xp|) at delta = 0, i.e. the kernel's
/// response to moving the observation point along the unit vector `dir`.
double scalar_green_directional(double kappa, const Vec3& x, const Vec3& xp, const Vec3& dir);

/// Same with dir = z.
inline double scalar_green_dz(double kappa, const Vec3& x, const Vec3& xp) {
  return scalar_green_directional(kappa, x, xp, Vec3::UnitZ());
}

enum class PanelPairClass { SelfPanel, CommonEdge, CommonVertex, Near, Far };
const char* to_string(PanelPairClass c);

/// A panel as seen by the quadrature: corners in the mesh's vertex order,
/// plus the identifiers used for topology tests and error messages.
struct PanelGeometry {
  std::array<Vec3, 3> corners;
  std::array<int, 3> vertex_ids{};
  Vec3 centroid = Vec3::Zero();
  double area = 0.0;
  double diameter = 0.0;
  int instance = 0;
  int index = 0;

  static PanelGeometry from_mesh(const TriangleMesh& mesh, int panel, int instance);
};

/// Pair class plus, for the singular classes, corner orderings that put the
/// shared vertices first and in matching positions on both panels.
struct PairClassification {
  PanelPairClass kind = PanelPairClass::Far;
  std::array<int, 3> order_a{0, 1, 2};
  std::array<int, 3> order_b{0, 1, 2};
};

/// Topology decides the singular classes (same instance only); otherwise
/// Near when the centroid distance is below near_factor * max diameter.
PairClassification classify_pair(const PanelGeometry& a, const PanelGeometry& b,
                                 double near_factor = 3.0);

/// Kernel-weighted moments of a panel pair, with coordinates taken
/// relative to each panel's centroid (xt = x - c_a, yt = y - c_b):
///   i0 = sum g,  ix = sum g xt,  iy = sum g yt,  ixy = sum g xt.yt
struct PanelMoments {
  double i0 = 0.0;
  Vec3 ix = Vec3::Zero();
  Vec3 iy = Vec3::Zero();
  double ixy = 0.0;
};

/// Moments of g over a panel pair with the scheme selected by `cls`:
/// tensor Gauss-Legendre on Sauter-Schwab subdomains for the singular
/// classes, symmetric triangle rules for Near and Far.
PanelMoments panel_pair_moments(const PanelGeometry& a, const PanelGeometry& b,
                                const PairClassification& cls, const KernelParams& params,
                                const QuadratureSpec& quad);

/// Moments of the directional derivative kernel (observation panel `a`
/// moved along `dir`). Only defined for non-touching pairs.
PanelMoments panel_pair_moments_directional(const PanelGeometry& a, const PanelGeometry& b,
                                            const PairClassification& cls, const KernelParams& params,
                                            const QuadratureSpec& quad, const Vec3& dir);

/// Side data of the three RWG functions touching a panel, in local edge
/// order (side k is opposite corner k).
struct PanelBasisSides {
  std::array<double, 3> sign{};
  std::array<double, 3> length{};
};

/// 3x3 block of Galerkin elements between the RWG sides of panels a and b:
///   sum [ f_k . f_m + (1/kappa^2) div f_k div f_m ] g
/// evaluated from precomputed moments. Sides with sign 0 contribute 0.
Eigen::Matrix3d panel_pair_elements(const PanelMoments& m, const PanelGeometry& a,
                                    const PanelBasisSides& sa, const PanelGeometry& b,
                                    const PanelBasisSides& sb, double kappa);

PanelBasisSides basis_sides(const RwgBasis& basis, int panel);

// Lower-level entry points used by the assembly loops.

/// Quadrature points of one panel for a triangle rule: positions relative
/// to the centroid and weights including the panel area.
struct PanelPoints {
  Eigen::Matrix<double, Eigen::Dynamic, 3, 0, 16, 3> rel;
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1> w;
};

PanelPoints panel_points(const PanelGeometry& panel, const TriangleRule& rule);

/// Tensor-product rule over two non-touching panels.
PanelMoments regular_pair_moments(const PanelPoints& a, const Vec3& ca, const PanelPoints& b,
                                  const Vec3& cb, double kappa);

/// Value and directional-derivative moments from one set of kernel samples.
void regular_pair_moments_with_directional(const PanelPoints& a, const Vec3& ca, const PanelPoints& b,
                                           const Vec3& cb, double kappa, const Vec3& dir,
                                           PanelMoments& value, PanelMoments& derivative);

/// Sauter-Schwab scheme for SelfPanel, CommonEdge and CommonVertex pairs,
/// `order` Gauss-Legendre points per dimension of each 4D subdomain.
PanelMoments singular_pair_moments(const PanelGeometry& a, const PanelGeometry& b,
                                   const PairClassification& cls, double kappa, int order);

/// Galerkin element M_ab between basis `alpha` of object `obj_a` and basis
/// `beta` of object `obj_b` (indices local to each object), summed over the
/// 2x2 panel pairs of their supports.
double rwg_pair_integral(const Configuration& config, int obj_a, int alpha, int obj_b, int beta,
                         const KernelParams& params, const QuadratureSpec& quad);

}  // namespace casimir
