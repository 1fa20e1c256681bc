#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace modinv {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatD = Eigen::MatrixXd;
using MatI = Eigen::MatrixXi;
using VecC = Eigen::VectorXcd;
using VecD = Eigen::VectorXd;

// Default tolerance for every floating-point residual in the library.
// Residuals are absolute (entrywise max), never relative.
inline constexpr double kDefaultTol = 1e-9;

// Candidates whose residual lands in (tol, kSuspectFactor*tol] are kept and
// reported as "suspect" instead of being silently dropped.
inline constexpr double kSuspectFactor = 1e3;

// Y is considered degenerate when its smallest singular value is at most
// sqrt(w) * kDegeneracyScale.
inline constexpr double kDegeneracyScale = 1e-6;

class validation_error : public std::runtime_error {
 public:
  validation_error(std::string invariant, double residual)
      : std::runtime_error("validation failed: " + invariant +
                           " (residual " + std::to_string(residual) + ")"),
        invariant(std::move(invariant)),
        residual(residual) {}
  std::string invariant;
  double residual;
};

class fusion_error : public std::runtime_error {
 public:
  fusion_error(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

class degeneracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class inapplicable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class internal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace modinv
