#pragma once

#include <vector>

#include "casimir/assembly.hpp"

namespace casimir {

/// Integrands at one imaginary wavenumber.
struct IntegrandSample {
  double kappa = 0.0;
  double energy_integrand = 0.0;  // log det M / det M_inf
  double force_integrand = 0.0;   // Tr(M^-1 dM), per unit displacement
  double min_pivot = 0.0;         // smallest squared Cholesky pivot of the normalized matrix
  double condition_estimate = 0.0;
};

/// log det M - log det M_inf from Cholesky factors. The object blocks of
/// M_inf are factored first and M is normalized by them, so the remaining
/// factorization only sees the coupling. A failed Cholesky falls back to
/// LDL^T with sign tracking; a negative ratio throws NumericalError.
double logdet_ratio(const InteractionMatrix& m, const InteractionMatrix& m_inf, IntegrandSample* diag = nullptr);

/// Same quantity from the full symmetric spectra of M and M_inf.
double logdet_ratio_eig(const InteractionMatrix& m, const InteractionMatrix& m_inf);

/// Tr(M^-1 dM) from one Cholesky factorization of M.
double force_trace(const InteractionMatrix& m, const MatrixDerivative& dm);

/// Generalized eigenvalues of dM v = alpha M v.
std::vector<double> force_eigs(const InteractionMatrix& m, const MatrixDerivative& dm);

/// Magnitudes below this are reported as exactly zero.
inline constexpr double kIntegrandFloor = 1e-15;

}  // namespace casimir
