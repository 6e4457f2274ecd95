#include "casimir/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr int kEigLimit = 1000;

void check_layout(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.dimension() != b.dimension() || a.offsets != b.offsets || a.sizes != b.sizes) {
    throw NumericalError("matrices have different block layouts");
  }
  if (a.kappa != b.kappa) throw NumericalError("matrices were assembled at different kappa");
}

double clamp_floor(double x) { return std::abs(x) < kIntegrandFloor ? 0.0 : x; }

struct SignedLogDet {
  double log_abs = 0.0;
  int sign = 1;
};

SignedLogDet ldlt_logdet(const Eigen::MatrixXd& a) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("LDL^T factorization failed");
  SignedLogDet out;
  const Eigen::VectorXd d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) == 0.0) throw NumericalError("matrix is singular");
    if (d(i) < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d(i)));
  }
  return out;
}

double fallback_ratio(const InteractionMatrix& m, const InteractionMatrix& m_inf) {
  const SignedLogDet a = ldlt_logdet(m.values);
  const SignedLogDet b = ldlt_logdet(m_inf.values);
  if (a.sign * b.sign < 0) {
    throw NumericalError("negative determinant ratio at kappa=" + std::to_string(m.kappa) +
                         " (assembly or quadrature defect)");
  }
  return a.log_abs - b.log_abs;
}

}  // namespace

double logdet_ratio(const InteractionMatrix& m, const InteractionMatrix& m_inf, IntegrandSample* diag) {
  check_layout(m, m_inf);
  if (diag) diag->kappa = m.kappa;
  if (m.values == m_inf.values) {
    if (diag) diag->min_pivot = diag->condition_estimate = 1.0;
    return 0.0;
  }

  // W = L^-1 M L^-T with L the block-diagonal Cholesky factor of M_inf.
  Eigen::MatrixXd w = m.values;
  const int nb = m.block_count();
  for (int i = 0; i < nb; ++i) {
    Eigen::LLT<Eigen::MatrixXd> llt(m_inf.block(i, i));
    if (llt.info() != Eigen::Success) return clamp_floor(fallback_ratio(m, m_inf));
    const auto off = m.offsets[static_cast<size_t>(i)];
    const auto sz = m.sizes[static_cast<size_t>(i)];
    auto rows = w.middleRows(off, sz);
    llt.matrixL().solveInPlace(rows);
    auto cols = w.middleCols(off, sz);
    Eigen::MatrixXd ct = cols.transpose();
    llt.matrixL().solveInPlace(ct);
    cols = ct.transpose();
  }
  w = 0.5 * (w + w.transpose()).eval();
  // Where M and M_inf share a self block its normalized block is exactly the
  // identity; using it avoids the rounding of L^-1 A L^-T, which grows with
  // the condition number of A.
  for (int i = 0; i < nb; ++i) {
    if (m.block(i, i) == m_inf.block(i, i)) {
      const auto off = m.offsets[static_cast<size_t>(i)];
      const auto sz = m.sizes[static_cast<size_t>(i)];
      w.block(off, off, sz, sz).setIdentity();
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success) return clamp_floor(fallback_ratio(m, m_inf));
  const Eigen::VectorXd piv = llt.matrixLLT().diagonal();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < piv.size(); ++i) sum += std::log(piv(i));
  if (diag) {
    diag->min_pivot = piv.minCoeff() * piv.minCoeff();
    diag->condition_estimate = (piv.maxCoeff() * piv.maxCoeff()) / diag->min_pivot;
  }
  return clamp_floor(2.0 * sum);
}

double logdet_ratio_eig(const InteractionMatrix& m, const InteractionMatrix& m_inf) {
  check_layout(m, m_inf);
  if (m.dimension() > kEigLimit) throw NumericalError("eigenvalue path limited to N <= 1000");
  if (m.values == m_inf.values) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(m.values, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(m_inf.values, Eigen::EigenvaluesOnly);
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& la = ea.eigenvalues();
  const Eigen::VectorXd& lb = eb.eigenvalues();
  if (la.minCoeff() <= 0.0 || lb.minCoeff() <= 0.0) {
    throw NumericalError("non-positive eigenvalue at kappa=" + std::to_string(m.kappa));
  }
  // Eigenvalues come sorted; pairing them keeps each log difference small.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < la.size(); ++i) sum += std::log(la(i) / lb(i));
  return clamp_floor(sum);
}

double force_trace(const InteractionMatrix& m, const MatrixDerivative& dm) {
  check_layout(m, dm);
  Eigen::LLT<Eigen::MatrixXd> llt(m.values);
  if (llt.info() != Eigen::Success) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m.values);
    if (ldlt.info() != Eigen::Success) throw NumericalError("factorization of M failed");
    return clamp_floor(ldlt.solve(dm.values).trace());
  }
  return clamp_floor(llt.solve(dm.values).trace());
}

std::vector<double> force_eigs(const InteractionMatrix& m, const MatrixDerivative& dm) {
  check_layout(m, dm);
  if (m.dimension() > kEigLimit) throw NumericalError("eigenvalue path limited to N <= 1000");
  const Eigen::MatrixXd a = 0.5 * (dm.values + dm.values.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, m.values,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed (M not positive definite?)");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace casimir
