#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fop {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Numerical thresholds shared by every module.
namespace tol {
inline constexpr double structural = 1e-10;     // group relations, unitarity
inline constexpr double rank = 1e-6;            // integer rounding of traces
inline constexpr double stabilizer = 1e-7;      // relative isotropy radius
inline constexpr double pivot = 1e-9;           // basis column reduction
inline constexpr double span = 1e-8;            // module span membership
inline constexpr double transversality = 1e-8;  // certificate margin tau
inline constexpr double zero_residual = 1e-7;   // certificate precondition
inline constexpr double dedup = 1e-6;           // solver/orbit merge radius
inline constexpr double separation = 1e-6;      // projected orbit collisions
}  // namespace tol

/// Malformed or inconsistent input (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure in a certificate or the solver (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

/// Smallest singular value among the leading `rank` ones, i.e. sigma_rank.
/// Returns +inf when rank == 0 (vacuous condition).
inline double singular_value_at(const CMat& m, int rank) {
  if (rank <= 0) return std::numeric_limits<double>::infinity();
  if (m.rows() < rank || m.cols() < rank) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(rank - 1);
}

inline int numerical_rank(const CMat& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++r;
  return r;
}

/// Greedy Gram-Schmidt over the columns of `cols`, keeping columns whose
/// residual exceeds `threshold`. Returns an orthonormal basis of their span.
inline CMat orthonormal_columns(const CMat& cols, double threshold) {
  CMat q(cols.rows(), 0);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    CVec r = cols.col(j);
    for (int pass = 0; pass < 2; ++pass)
      if (q.cols() > 0) r -= q * (q.adjoint() * r);
    double n = r.norm();
    if (n > threshold) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = r / n;
    }
  }
  return q;
}

inline double sup_norm(const CMat& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) s = std::max(s, std::abs(m.data()[i]));
  return s;
}

}  // namespace fop
