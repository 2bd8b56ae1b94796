#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace hybridbeam {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;
using RMatrixd = RMatrix<double>;
using RVectord = RVector<double>;
using BitVector = Eigen::VectorXi;

// Raised when a matrix that must be nonsingular (combiner Gram, channel) is not.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

enum class Side { kTx, kRx };

inline const char* side_name(Side side) { return side == Side::kTx ? "tx" : "rx"; }

}  // namespace hybridbeam
