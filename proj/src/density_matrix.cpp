#include "regsim/density_matrix.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regsim {

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols())
        throw ValidationError("density matrix must be square");
    if (entries_.rows() < 2)
        throw ValidationError("density matrix dimension must be at least 2");
}

DensityMatrix::DensityMatrix(ComplexMatrix entries, Eigen::VectorXd eigenvalues)
    : entries_(std::move(entries)), eigenvalues_(std::move(eigenvalues))
{
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hermitian eigensolver did not converge");
    return solver.eigenvalues();
}

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hermitian eigensolver did not converge");
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

DensityMatrix make_initial_state(int dim, double salience_center, double salience_width,
                                 double phase_noise, RandomStream& rng)
{
    if (dim < 2)
        throw ValidationError("initial state needs dim >= 2, got " + std::to_string(dim));
    if (!(salience_width > 0.0))
        throw ValidationError("salience width must be positive");
    if (!(phase_noise >= 0.0))
        throw ValidationError("phase noise must be non-negative");

    Eigen::VectorXcd psi(dim);
    for (int k = 0; k < dim; ++k) {
        const double offset = k - salience_center;
        const double envelope = std::exp(-offset * offset / (2.0 * salience_width * salience_width));
        const double theta = rng.gaussian(phase_noise);
        psi[k] = std::polar(envelope, theta);
    }
    const double norm = psi.norm();
    if (!(norm > 0.0))
        throw NumericalError("initial amplitude envelope vanishes on every basis state");
    psi /= norm;
    return repair(DensityMatrix(psi * psi.adjoint()));
}

DensityMatrix maximally_mixed(int dim)
{
    if (dim < 2)
        throw ValidationError("maximally mixed state needs dim >= 2, got " + std::to_string(dim));
    return repair(DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityMatrix diagonal_state(const Eigen::VectorXd& weights)
{
    ComplexMatrix m = ComplexMatrix::Zero(weights.size(), weights.size());
    m.diagonal() = weights.cast<Complex>();
    return DensityMatrix(std::move(m));
}

double purity(const DensityMatrix& rho)
{
    return rho.matrix().cwiseAbs2().sum();
}

double von_neumann_entropy(const DensityMatrix& rho, bool normalized)
{
    const Eigen::VectorXd* known = rho.known_eigenvalues();
    const Eigen::VectorXd eigenvalues = known ? *known : hermitian_eigenvalues(rho.matrix());
    double entropy = 0.0;
    for (double lambda : eigenvalues)
        if (lambda > kEigenvalueClip)
            entropy -= lambda * std::log(lambda);
    if (normalized)
        entropy /= std::log(static_cast<double>(rho.dim()));
    return entropy;
}

double coherence_gap(const DensityMatrix& rho)
{
    return 1.0 - purity(rho);
}

double max_hermitian_asymmetry(const ComplexMatrix& m)
{
    return std::sqrt((m - m.adjoint()).cwiseAbs2().maxCoeff());
}

DensityMatrix repair(const DensityMatrix& rho)
{
    const ComplexMatrix& m = rho.matrix();
    const double asymmetry = max_hermitian_asymmetry(m);
    if (!(asymmetry <= kRepairAsymmetryLimit))
        throw ValidationError("repair input is not approximately Hermitian (asymmetry " +
                              std::to_string(asymmetry) + ")");

    ComplexMatrix hermitian = (m + m.adjoint()) * 0.5;

    Eigen::VectorXd eigenvalues = hermitian_eigenvalues(hermitian);

    // Eigenvalues this close to zero are round-off; rebuilding from clipped
    // eigenpairs would reintroduce errors of the same size, so keep the entries.
    if (eigenvalues.minCoeff() >= -kRoundoffEigenvalue) {
        const double trace = hermitian.diagonal().real().sum();
        if (!(trace > kEigenvalueClip))
            throw NumericalError("unrecoverable state: trace vanished during repair");
        // Dividing the parts separately avoids a full complex division per entry.
        hermitian.real() /= trace;
        hermitian.imag() /= trace;
        eigenvalues /= trace;
        return DensityMatrix(std::move(hermitian), std::move(eigenvalues));
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hermitian eigensolver did not converge during repair");
    Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
    const double trace = clipped.sum();
    if (!(trace > kEigenvalueClip))
        throw NumericalError("unrecoverable state: trace vanished after eigenvalue clipping");
    clipped /= trace;

    const ComplexMatrix& vectors = solver.eigenvectors();
    ComplexMatrix rebuilt = vectors * clipped.cast<Complex>().asDiagonal() * vectors.adjoint();
    rebuilt = ((rebuilt + rebuilt.adjoint()) * 0.5).eval();
    return DensityMatrix(std::move(rebuilt), std::move(clipped));
}

InvariantReport check_invariants(const DensityMatrix& rho)
{
    InvariantReport report;
    report.hermitian_error = max_hermitian_asymmetry(rho.matrix());
    report.trace_error = std::abs(rho.matrix().trace() - Complex(1.0, 0.0));
    report.min_eigenvalue = hermitian_eigenvalues(rho.matrix()).minCoeff();
    return report;
}

} // namespace regsim
