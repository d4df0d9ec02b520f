#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qres/spectral.hpp"

namespace qres {

FloquetSpectrum floquet_spectrum(const Matrix& u, double period)
{
    // U is normal, so its Schur form is diagonal and the Schur vectors are
    // orthonormal Floquet modes even for degenerate quasienergies.
    Eigen::ComplexSchur<Matrix> schur(u);
    if (schur.info() != Eigen::Success) throw Error("floquet_spectrum: Schur decomposition failed");
    FloquetSpectrum fs;
    const Index n = u.rows();
    fs.quasienergies.resize(n);
    for (Index j = 0; j < n; ++j) fs.quasienergies(j) = -std::arg(schur.matrixT()(j, j)) / period;
    fs.modes = schur.matrixU();
    fs.period = period;
    return fs;
}

double max_transition_probability(const FloquetSpectrum& fs, Index from, Index to, double degeneracy_tol)
{
    const Index n = fs.modes.cols();
    if (from < 0 || to < 0 || from >= fs.modes.rows() || to >= fs.modes.rows()) {
        throw DimensionError("max_transition_probability: state index out of range");
    }
    std::vector<cplx> phase(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) phase[static_cast<std::size_t>(j)] = std::polar(1.0, -fs.quasienergies(j) * fs.period);
    std::vector<int> cluster(static_cast<std::size_t>(n), -1);
    int clusters = 0;
    for (Index j = 0; j < n; ++j) {
        if (cluster[static_cast<std::size_t>(j)] >= 0) continue;
        cluster[static_cast<std::size_t>(j)] = clusters;
        for (Index i = j + 1; i < n; ++i) {
            if (cluster[static_cast<std::size_t>(i)] < 0 &&
                std::abs(phase[static_cast<std::size_t>(i)] - phase[static_cast<std::size_t>(j)]) < degeneracy_tol) {
                cluster[static_cast<std::size_t>(i)] = clusters;
            }
        }
        ++clusters;
    }
    std::vector<cplx> amp(static_cast<std::size_t>(clusters), cplx(0.0));
    for (Index j = 0; j < n; ++j) {
        amp[static_cast<std::size_t>(cluster[static_cast<std::size_t>(j)])] +=
            fs.modes(to, j) * std::conj(fs.modes(from, j));
    }
    double total = 0.0;
    for (const cplx& c : amp) total += std::abs(c);
    return std::min(1.0, total * total);
}

double stroboscopic_max_transition(const Matrix& u, Index from, Index to, int periods)
{
    Vector psi = Vector::Zero(u.rows());
    psi(from) = 1.0;
    double best = 0.0;
    for (int n = 0; n <= periods; ++n) {
        best = std::max(best, std::norm(psi(to)));
        psi = u * psi;
    }
    return best;
}

}  // namespace qres
