#pragma once

#include <Eigen/Dense>
#include <complex>

namespace preb {

using cplx = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// C(p,q) = <d_p^dagger d_q>
using CorrelationMatrix = Eigen::MatrixXcd;

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const RMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace preb
