#include "qres/effective.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qres {

void check_small_parameter(const std::string& name, double value, std::vector<std::string>& warnings)
{
    const double v = std::abs(value);
    if (!std::isfinite(v)) throw RegimeError(name + " is not finite");
    std::ostringstream msg;
    msg.precision(6);
    if (v > kSmallParamMax) {
        msg << name << " = " << v << " exceeds " << kSmallParamMax << "; the small-rotation expansion is invalid";
        throw RegimeError(msg.str());
    }
    if (v > kSmallParamWarn) {
        msg << name << " = " << v << " exceeds " << kSmallParamWarn << "; effective terms may be inaccurate";
        warnings.push_back(msg.str());
    }
}

void RotationGenerator::validate(std::vector<std::string>* warnings) const
{
    if (!T.is_anti_hermitian()) throw Error("rotation generator is not anti-Hermitian");
    std::vector<std::string> local;
    check_small_parameter("epsilon", epsilon, warnings ? *warnings : local);
}

OperatorMatrix bch_transform(const OperatorMatrix& h, const RotationGenerator& gen, int order)
{
    require_same_dim(h, gen.T, "bch_transform");
    if (order < 1) throw Error("bch_transform: order must be at least 1");
    gen.validate();
    Matrix term = h.matrix();
    Matrix sum = term;
    const Matrix& t = gen.T.matrix();
    double coeff = 1.0;
    for (int k = 1; k <= order; ++k) {
        term = t * term - term * t;
        coeff *= gen.epsilon / k;
        sum += coeff * term;
    }
    return h.is_hermitian() ? OperatorMatrix::make_hermitian(sum) : OperatorMatrix(sum);
}

Matrix rotation_unitary(const RotationGenerator& gen)
{
    if (!gen.T.is_anti_hermitian()) throw Error("rotation generator is not anti-Hermitian");
    // e^{eps T} = e^{-i eps (i T)} with i T Hermitian
    const Matrix iT = cplx(0.0, 1.0) * gen.T.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (iT + iT.adjoint()));
    const Vector phases =
        (solver.eigenvalues() * (-gen.epsilon)).unaryExpr([](double x) { return std::polar(1.0, x); });
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

OperatorMatrix exact_conjugate(const OperatorMatrix& h, const RotationGenerator& gen)
{
    require_same_dim(h, gen.T, "exact_conjugate");
    const Matrix u = rotation_unitary(gen);
    const Matrix out = u * h.matrix() * u.adjoint();
    return h.is_hermitian() ? OperatorMatrix::make_hermitian(out) : OperatorMatrix(out);
}

EliminationResult eliminate_term(const OperatorMatrix& h, const TwoSubsystem& sys, double omega, double Omega,
                                 const EliminationTarget& target, double coeff, int order)
{
    if (target.n < 0 || target.m < 0 || target.n + target.m == 0) throw Error("eliminate_term: invalid exponents");
    if (order < 0) throw Error("eliminate_term: order must be non-negative");
    const OperatorMatrix ym = target.counter_rotating ? power(sys.yplus(), target.m) : power(sys.yminus(), target.m);
    const OperatorMatrix v = power(sys.xplus(), target.n) * ym;

    EliminationResult r;
    r.denominator = target.n * omega + (target.counter_rotating ? 1.0 : -1.0) * target.m * Omega;
    r.generator.T = v - v.adjoint();
    if (coeff != 0.0) {
        if (std::abs(r.denominator) < 10.0 * std::abs(coeff)) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "resonant term, cannot eliminate: |denominator| = " << std::abs(r.denominator)
                << " < 10 |coefficient| = " << 10.0 * std::abs(coeff);
            throw ResonantTermError(msg.str());
        }
        r.generator.epsilon = coeff / r.denominator;
    }
    r.generator.validate(&r.warnings);
    r.hamiltonian = order == 0 ? exact_conjugate(h, r.generator) : bch_transform(h, r.generator, order);
    return r;
}

// ---------------------------------------------------------------- closed forms

OperatorMatrix dicke_dispersive(const TwoSubsystem& dicke, const DickeRwaParams& p, std::vector<std::string>* warnings)
{
    const double delta = p.detuning();
    if (delta == 0.0) throw ResonantTermError("dispersive form needs a nonzero detuning");
    const double n_bar = static_cast<double>(dicke.y_ladder().labels.back());
    const double ratio = std::abs(p.g) * std::sqrt(std::max(n_bar, 1.0)) / std::abs(delta);
    if (warnings && ratio > kSmallParamWarn) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "g sqrt(n)/Delta = " << ratio << " is not small; the dispersive form may be inaccurate";
        warnings->push_back(msg.str());
    }
    const OperatorMatrix& sz = dicke.x0();
    const OperatorMatrix& n = dicke.y0();
    const OperatorMatrix id = OperatorMatrix::identity(dicke.dim());
    OperatorMatrix h = delta * sz;
    h += (p.g * p.g / delta) * ((2.0 * n + id) * sz - sz * sz);
    return h.as_hermitian();
}

// ---------------------------------------------------------------- non-RWA series

namespace {

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

int floor_div2(int k)
{
    return k >= 0 ? k / 2 : -((-k + 1) / 2);
}

// nabla^0 f = 1 in this formula.
double nabla_or_one(const StructuralFunction& f, double z, int order)
{
    return order == 0 ? 1.0 : f.nabla(z, order);
}

double r_k(int k, const StructuralFunction& phi1, const StructuralFunction& phi2, double x, double y)
{
    const int big_k = floor_div2(k - 1);
    const double p_hi = phi1.nabla(x + k);
    const double p_lo = -phi1.nabla(x);
    double sum = 0.0;
    for (int j = 0; j <= big_k; ++j) {
        double term = binomial(big_k, j) * std::pow(p_hi, big_k - j) * std::pow(p_lo, j);
        term *= nabla_or_one(phi2, y - 2 * j, k - 1);
        for (int i = 1 - 2 * j; i <= k - 2 * (j + 1); ++i) term *= phi2(y + i);
        sum += term;
    }
    return sum;
}

}  // namespace

double theta_value(int k, int l, const StructuralFunction& phi1, const StructuralFunction& phi2, double x0,
                   double y0)
{
    if (k < 1 || l < 0) throw Error("theta: requires k >= 1 and l >= 0");
    if (k == 1 && l == 0) return 1.0;
    const int big_l = l + floor_div2(k);
    const double p_hi = phi1.nabla(x0 + k);
    const double p_lo = -phi1.nabla(x0);
    double sum = 0.0;
    for (int j = 0; j <= big_l; ++j) {
        sum += binomial(big_l, j) * std::pow(p_hi, big_l - j) * std::pow(p_lo, j) *
               r_k(k, phi1, phi2, x0, y0 - 2 * j);
    }
    return sum;
}

OperatorMatrix theta_coefficient(int k, int l, const StructuralFunction& phi1, const StructuralFunction& phi2,
                                 const std::vector<double>& x_labels, const std::vector<double>& y_labels)
{
    RealVector d(static_cast<Index>(x_labels.size() * y_labels.size()));
    Index idx = 0;
    for (double x : x_labels) {
        for (double y : y_labels) d(idx++) = theta_value(k, l, phi1, phi2, x, y);
    }
    return OperatorMatrix::diagonal(d);
}

double series_prefactor(int k, int l, double g, double delta, double eps)
{
    if (k < 1 || l < 0) throw Error("series prefactor: requires k >= 1 and l >= 0");
    return g * std::pow(-delta, l + k - 1) * std::pow(eps, l + 2 * (k - 1)) / (factorial(k - 1) * factorial(l + k - 1));
}

OperatorMatrix EffectiveSeries::assemble() const
{
    OperatorMatrix h = diagonal;
    for (const auto& t : terms) h += t.prefactor * plus_hc(t.operator_);
    return h;
}

const SeriesTerm* EffectiveSeries::find(int k, int l) const
{
    for (const auto& t : terms) {
        if (t.k == k && t.l == l) return &t;
    }
    return nullptr;
}

EffectiveSeries nonrwa_series(const TwoSubsystem& sys, double omega, double Omega, double g, const SeriesOptions& opts)
{
    if (!(Omega > 0.0)) throw Error("nonrwa_series: the field frequency must be positive");
    if (omega < Omega) {
        throw RegimeError("omega < Omega: higher resonances are suppressed in this regime; the series is not built");
    }
    if (opts.l_max < 0) throw Error("nonrwa_series: l_max must be non-negative");

    EffectiveSeries s;
    s.omega = omega;
    s.Omega = Omega;
    s.g = g;
    s.epsilon = g / (omega + Omega);
    s.delta = g / (2.0 * Omega);
    check_small_parameter("epsilon", s.epsilon, s.warnings);
    check_small_parameter("delta", s.delta, s.warnings);

    const Ladder& xl = sys.x_ladder();
    const Ladder& yl = sys.y_ladder();
    const StructuralFunction& phi1 = xl.phi;
    const StructuralFunction& phi2 = yl.phi;

    RealVector stark(sys.dim());
    Index idx = 0;
    for (double x : xl.labels) {
        for (double y : yl.labels) stark(idx++) = phi1(x) * phi2(y) - phi1(x + 1) * phi2(y + 1);
    }
    s.diagonal = omega * sys.x0() + Omega * sys.y0();
    s.diagonal += (g * s.epsilon) * OperatorMatrix::diagonal(stark);

    const int y_span = static_cast<int>(yl.labels.size()) - 1;
    const int k_max = opts.k_max > 0 ? opts.k_max : static_cast<int>(xl.labels.size()) - 1;
    for (int k = 1; k <= k_max; ++k) {
        for (int l = 0; l <= opts.l_max; ++l) {
            if (std::gcd(k, l) != 1) continue;
            if (2 * l + k > y_span) continue;
            const double pre = series_prefactor(k, l, g, s.delta, s.epsilon);
            if (pre == 0.0) continue;
            SeriesTerm t;
            t.k = k;
            t.l = l;
            t.prefactor = pre;
            t.theta = theta_coefficient(k, l, phi1, phi2, xl.labels, yl.labels);
            if (t.theta.max_abs() <= opts.zero_tol) continue;
            t.operator_ = power(sys.xplus(), k) * power(sys.yminus(), 2 * l + k) * t.theta;
            if (t.operator_.max_abs() <= opts.zero_tol) continue;
            s.terms.push_back(std::move(t));
        }
    }
    return s;
}

IntegralOfMotion integral_of_motion_Nkl(int k, int l, const TwoSubsystem& dicke, double delta)
{
    if (l == 0) throw Error("N^(kl) is singular for l = 0; use S_z + a^dag a for the principal resonance");
    if (l < 0 || !(k == 1 || (k == 2 && l % 2 == 1))) {
        throw Error("N^(kl) is defined for k = 1 (odd series) or k = 2 with odd l (even series)");
    }
    const OperatorMatrix& sz = dicke.x0();
    const OperatorMatrix& n = dicke.y0();
    const OperatorMatrix id = OperatorMatrix::identity(dicke.dim());
    const double w = 2.0 * l + k;
    OperatorMatrix op = w * sz + static_cast<double>(k) * n;
    op += (2.0 * k * delta) * (plus_hc(dicke.xplus()) * plus_hc(dicke.yplus()));
    const double c2 = 2.0 * k * k * delta * delta / (static_cast<double>(l) * (l + k));
    op -= c2 * (w * sz * (2.0 * n + id) - static_cast<double>(k) * (sz * sz));
    return {k, l, delta, op.as_hermitian()};
}

}  // namespace qres
