#pragma once

#include "regsim/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace regsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerances shared by repair and the invariant checks.
inline constexpr double kEigenvalueClip = 1e-12;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kRepairAsymmetryLimit = 1e-6;
/// Negative eigenvalues above this are treated as round-off by repair().
inline constexpr double kRoundoffEigenvalue = 1e-13;

/**
 * Density matrix rho: a d x d complex matrix that, once passed through
 * repair(), is Hermitian, unit-trace and positive semidefinite.
 *
 * Values are immutable. States produced by repair() carry their eigenvalues
 * so entropy can be read without a second eigensolve.
 */
class DensityMatrix {
public:
    /// Wraps raw entries without repairing them. Rejects non-square or d < 2.
    explicit DensityMatrix(ComplexMatrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const ComplexMatrix& matrix() const { return entries_; }
    Complex operator()(int row, int col) const { return entries_(row, col); }

    /// Ascending eigenvalues when known from repair(); nullptr otherwise.
    const Eigen::VectorXd* known_eigenvalues() const
    {
        return eigenvalues_ ? &*eigenvalues_ : nullptr;
    }

private:
    friend DensityMatrix repair(const DensityMatrix& rho);
    DensityMatrix(ComplexMatrix entries, Eigen::VectorXd eigenvalues);

    ComplexMatrix entries_;
    std::optional<Eigen::VectorXd> eigenvalues_;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // descending
    ComplexMatrix eigenvectors;   // column k pairs with eigenvalues[k]
};

/// Full Hermitian eigendecomposition (the lower triangle is read).
SpectralDecomposition spectral_decomposition(const DensityMatrix& rho);

/// Ascending eigenvalues of a Hermitian matrix. Throws NumericalError on non-convergence.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

/// Pure state with a Gaussian amplitude envelope over basis indices and
/// Gaussian random phases, drawn in ascending basis order.
DensityMatrix make_initial_state(int dim, double salience_center, double salience_width,
                                 double phase_noise, RandomStream& rng);

DensityMatrix maximally_mixed(int dim);

/// Diagonal state from real weights (test fixtures and examples).
DensityMatrix diagonal_state(const Eigen::VectorXd& weights);

/// Tr(rho^2), summed entrywise.
double purity(const DensityMatrix& rho);

/// -sum lambda ln lambda; eigenvalues <= 1e-12 contribute nothing.
/// With normalized = true the result is divided by ln(d).
double von_neumann_entropy(const DensityMatrix& rho, bool normalized);

/// 1 - Tr(rho^2).
double coherence_gap(const DensityMatrix& rho);

/// Hermitize, clip negative eigenvalues, renormalize the trace. Positive
/// definite inputs skip the eigensolve.
/// Throws ValidationError if the input is far from Hermitian and
/// NumericalError if nothing is left after clipping.
DensityMatrix repair(const DensityMatrix& rho);

struct InvariantReport {
    double hermitian_error = 0.0;  // max |rho_ij - conj(rho_ji)|
    double trace_error = 0.0;      // |Tr rho - 1|
    double min_eigenvalue = 0.0;

    bool ok() const
    {
        return hermitian_error <= kHermitianTolerance && trace_error <= kTraceTolerance &&
               min_eigenvalue >= -kTraceTolerance;
    }
};

/// Measures the state invariants with a fresh eigensolve.
InvariantReport check_invariants(const DensityMatrix& rho);

double max_hermitian_asymmetry(const ComplexMatrix& m);

} // namespace regsim
