#ifndef RSPCAT_TYPES_HPP
#define RSPCAT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rspcat {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Mode { A, B };
enum class Parity { Even, Odd };

inline int parity_sign(Parity p) { return p == Parity::Even ? +1 : -1; }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested Fock cutoff leaves more tail mass than the tolerance allows.
struct CutoffTooSmall : Error {
    using Error::Error;
};

/// Photon subtraction heralded on a state that cannot produce a click.
struct VacuumSubtraction : Error {
    using Error::Error;
};

/// Odd cat state at alpha = 0; its normalization is singular.
struct DegenerateCat : Error {
    using Error::Error;
};

/// Covariance matrix violates the symplectic uncertainty relation.
struct Unphysical : Error {
    using Error::Error;
};

/// Covariance matrix is not reachable by the effective mixed-state model.
struct NoSolution : Error {
    using Error::Error;
};

/// Guard for test-only dense materializations.
struct CutoffTooLargeForOracle : Error {
    using Error::Error;
};

}  // namespace rspcat

#endif
