#include "qres/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qres {

Eigensystem diagonalize(const OperatorMatrix& h)
{
    if (!h.is_hermitian()) throw Error("diagonalize: operator is not tagged Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw Error("diagonalize: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double eigen_residual(const OperatorMatrix& h, const Eigensystem& es)
{
    const Matrix r = h.matrix() * es.vectors - es.vectors * es.values.cast<cplx>().asDiagonal();
    return r.colwise().norm().maxCoeff();
}

double expectation(const OperatorMatrix& op, const Vector& psi)
{
    return psi.dot(op.matrix() * psi).real();
}

Matrix propagator(const Eigensystem& es, double t)
{
    const Vector phases = (es.values * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

std::vector<double> EvolutionResult::observable(const OperatorMatrix& op) const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(expectation(op, s));
    return out;
}

std::vector<double> EvolutionResult::population(Index basis_state) const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(std::norm(s(basis_state)));
    return out;
}

double EvolutionResult::max_leakage() const
{
    return leakage.empty() ? 0.0 : *std::max_element(leakage.begin(), leakage.end());
}

namespace {

void check_initial(const Vector& psi0, Index dim)
{
    if (psi0.size() != dim) throw DimensionError("initial state dimension does not match the Hamiltonian");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw EvolutionError("initial state is not normalized");
}

void record(EvolutionResult& r, double t, Vector psi, const RealVector& interior)
{
    const double drift = std::abs(psi.norm() - 1.0);
    r.max_norm_drift = std::max(r.max_norm_drift, drift);
    if (drift > kNormAbort) throw EvolutionError("norm drift exceeded 1e-6; aborting evolution");
    double leak = 0.0;
    if (interior.size() == psi.size()) {
        leak = 1.0 - (interior.cast<cplx>().asDiagonal() * psi).squaredNorm();
    }
    r.times.push_back(t);
    r.states.push_back(std::move(psi));
    r.leakage.push_back(std::max(0.0, leak));
}

}  // namespace

EvolutionResult evolve(const OperatorMatrix& h, const Vector& psi0, const std::vector<double>& times,
                       const RealVector& interior)
{
    check_initial(psi0, h.dim());
    const Eigensystem es = diagonalize(h);
    const Vector c = es.vectors.adjoint() * psi0;
    EvolutionResult r;
    for (double t : times) {
        const Vector phases = (es.values * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
        record(r, t, es.vectors * (phases.cwiseProduct(c)), interior);
    }
    return r;
}

// ---------------------------------------------------------------- periodic

double PeriodicHamiltonian::period() const
{
    if (!(frequency > 0.0)) throw Error("periodic Hamiltonian needs a positive frequency");
    return 2.0 * M_PI / frequency;
}

OperatorMatrix PeriodicHamiltonian::at(double t) const
{
    OperatorMatrix h = constant;
    h += std::cos(frequency * t) * cos_part;
    h += std::sin(frequency * t) * sin_part;
    return h;
}

namespace {

Matrix hermitian_exp(const Matrix& h, double dt)
{
    // exp(-i h dt) for Hermitian h
    if (h.rows() == 1) return Matrix::Constant(1, 1, std::polar(1.0, -h(0, 0).real() * dt));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Vector phases = (solver.eigenvalues() * (-dt)).unaryExpr([](double x) { return std::polar(1.0, x); });
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix hamiltonian_at(const PeriodicHamiltonian& h, double t)
{
    return h.constant.matrix() + std::cos(h.frequency * t) * h.cos_part.matrix() +
           std::sin(h.frequency * t) * h.sin_part.matrix();
}

Matrix step(const PeriodicHamiltonian& h, double t, double dt, Integrator integ)
{
    if (integ == Integrator::midpoint) return hermitian_exp(hamiltonian_at(h, t + 0.5 * dt), dt);
    static const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    static const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
    static const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
    const Matrix h1 = hamiltonian_at(h, t + c1 * dt);
    const Matrix h2 = hamiltonian_at(h, t + c2 * dt);
    return hermitian_exp(a1 * h1 + a2 * h2, dt) * hermitian_exp(a2 * h1 + a1 * h2, dt);
}

}  // namespace

Matrix propagate(const PeriodicHamiltonian& h, double t0, double t1, const PropagationOptions& opts)
{
    if (t1 < t0) throw Error("propagate: t1 < t0");
    if (opts.steps_per_period < 1) throw Error("propagate: steps_per_period must be positive");
    const double max_dt = h.period() / opts.steps_per_period;
    const auto n = static_cast<long>(std::ceil((t1 - t0) / max_dt - 1e-12));
    Matrix u = Matrix::Identity(h.dim(), h.dim());
    if (n <= 0) return u;
    const double dt = (t1 - t0) / static_cast<double>(n);
    for (long s = 0; s < n; ++s) u = step(h, t0 + static_cast<double>(s) * dt, dt, opts.integrator) * u;
    return u;
}

Matrix monodromy(const PeriodicHamiltonian& h, const PropagationOptions& opts)
{
    return propagate(h, 0.0, h.period(), opts);
}

EvolutionResult evolve(const PeriodicHamiltonian& h, const Vector& psi0, const std::vector<double>& times,
                       const PropagationOptions& opts, const RealVector& interior)
{
    check_initial(psi0, h.dim());
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
        throw Error("periodic evolution needs a non-negative increasing time grid");
    }
    PropagationOptions fine = opts;
    fine.steps_per_period *= 2;

    EvolutionResult r;
    Vector psi = psi0;
    Vector psi_fine = psi0;
    double t = 0.0;
    for (double target : times) {
        psi = propagate(h, t, target, opts) * psi;
        psi_fine = propagate(h, t, target, fine) * psi_fine;
        t = target;
        r.step_halving_change = std::max(r.step_halving_change, (psi - psi_fine).cwiseAbs().maxCoeff());
        record(r, t, psi, interior);
    }
    return r;
}

// ---------------------------------------------------------------- comparisons

CompareReport compare_effective_vs_exact(const OperatorMatrix& h_full, const OperatorMatrix& h_eff,
                                         const Vector& psi0, const std::vector<double>& times,
                                         const std::vector<OperatorMatrix>& observables)
{
    require_same_dim(h_full, h_eff, "compare_effective_vs_exact");
    const EvolutionResult full = evolve(h_full, psi0, times);
    const EvolutionResult eff = evolve(h_eff, psi0, times);
    CompareReport rep;
    rep.times = times;
    rep.error.assign(times.size(), 0.0);
    for (const auto& obs : observables) {
        const auto a = full.observable(obs);
        const auto b = eff.observable(obs);
        for (std::size_t i = 0; i < times.size(); ++i) rep.error[i] = std::max(rep.error[i], std::abs(a[i] - b[i]));
    }
    for (double e : rep.error) rep.max_error = std::max(rep.max_error, e);
    return rep;
}

DriftReport conservation_drift(const OperatorMatrix& n_op, const OperatorMatrix& h, const Vector& psi0,
                               const std::vector<double>& times)
{
    require_same_dim(n_op, h, "conservation_drift");
    const EvolutionResult r = evolve(h, psi0, times);
    DriftReport d;
    d.times = times;
    d.values = r.observable(n_op);
    d.initial = expectation(n_op, psi0);
    for (double v : d.values) d.max_drift = std::max(d.max_drift, std::abs(v - d.initial));
    return d;
}

ScalingVerdict halving_scaling(const std::function<double(double)>& f, double x, double expected_ratio,
                               double rel_tol)
{
    ScalingVerdict v;
    v.value_full = f(x);
    v.value_half = f(0.5 * x);
    v.ratio = v.value_half > 0.0 ? v.value_full / v.value_half : 0.0;
    v.expected = expected_ratio;
    v.tolerance = rel_tol;
    v.pass = std::abs(v.ratio - expected_ratio) <= rel_tol * expected_ratio;
    return v;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {a};
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

}  // namespace qres
