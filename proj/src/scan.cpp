#include "qres/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

namespace qres {

namespace {

// Runs body(i) for i in [0, n) on up to thread_count() threads with a
// fixed index striping; the first exception is rethrown on the caller.
std::size_t thread_count()
{
    if (const char* env = std::getenv("QRES_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

template <class Body>
void parallel_for(std::size_t n, const Body& body)
{
    const std::size_t workers = std::min(n, thread_count());
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                               int max_iter)
{
    if (!(hi > lo)) throw Error("golden_section_minimize: empty interval");
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

std::vector<RealVector> track_levels(const HamiltonianFamily& family, const std::vector<double>& grid)
{
    std::vector<Eigensystem> spectra(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { spectra[i] = diagonalize(family(grid[i])); });
    std::vector<RealVector> out;
    out.reserve(grid.size());
    Matrix prev;
    for (const Eigensystem& es : spectra) {
        const Index n = es.values.size();
        if (prev.size() == 0) {
            out.push_back(es.values);
            prev = es.vectors;
            continue;
        }
        const Eigen::MatrixXd overlap = (prev.adjoint() * es.vectors).cwiseAbs2();
        std::vector<bool> taken(static_cast<std::size_t>(n), false);
        RealVector values(n);
        Matrix vectors(n, n);
        for (Index i = 0; i < n; ++i) {
            Index best = -1;
            double w = -1.0;
            for (Index j = 0; j < n; ++j) {
                if (!taken[static_cast<std::size_t>(j)] && overlap(i, j) > w) {
                    w = overlap(i, j);
                    best = j;
                }
            }
            taken[static_cast<std::size_t>(best)] = true;
            values(i) = es.values(best);
            vectors.col(i) = es.vectors.col(best);
        }
        out.push_back(values);
        prev = vectors;
    }
    return out;
}

double character_difference(const OperatorMatrix& h, Index a, Index b)
{
    if (a == b || a < 0 || b < 0 || a >= h.dim() || b >= h.dim()) {
        throw DimensionError("character_difference: invalid diabatic pair");
    }
    const Eigensystem es = diagonalize(h);
    Index first = -1, second = -1;
    double w1 = -1.0, w2 = -1.0;
    for (Index j = 0; j < es.values.size(); ++j) {
        const double w = std::norm(es.vectors(a, j)) + std::norm(es.vectors(b, j));
        if (w > w1) {
            second = first;
            w2 = w1;
            first = j;
            w1 = w;
        } else if (w > w2) {
            second = j;
            w2 = w;
        }
    }
    const double wa_first = std::norm(es.vectors(a, first));
    const double wa_second = std::norm(es.vectors(a, second));
    const Index a_like = wa_first >= wa_second ? first : second;
    const Index other = a_like == first ? second : first;
    return es.values(a_like) - es.values(other);
}

PairCrossing locate_pair_crossing(const HamiltonianFamily& family, Index a, Index b, double lo, double hi,
                                  const PairScanOptions& opts)
{
    double dlo = character_difference(family(lo), a, b);
    double dhi = character_difference(family(hi), a, b);
    PairCrossing r;
    if ((dlo > 0.0) == (dhi > 0.0)) return r;
    for (int it = 0; it < opts.max_iter && (hi - lo) > opts.x_tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = character_difference(family(mid), a, b);
        if ((dm > 0.0) == (dlo > 0.0)) {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
            dhi = dm;
        }
    }
    r.found = true;
    r.lo = lo;
    r.hi = hi;
    r.location = 0.5 * (lo + hi);
    r.gap = std::min(std::abs(dlo), std::abs(dhi));
    return r;
}

PairCrossing scan_pair_crossing(const HamiltonianFamily& family, Index a, Index b, const std::vector<double>& grid,
                                double near, const PairScanOptions& opts, std::vector<double>* differences)
{
    if (grid.size() < 2) throw Error("scan_pair_crossing: grid needs at least two points");
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw Error("scan_pair_crossing: grid must be strictly increasing");
    }
    std::vector<double> d(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { d[i] = character_difference(family(grid[i]), a, b); });
    std::size_t pick = grid.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if ((d[i] > 0.0) == (d[i + 1] > 0.0)) continue;
        const double dist = std::isnan(near) ? static_cast<double>(i) : std::abs(0.5 * (grid[i] + grid[i + 1]) - near);
        if (dist < best) {
            best = dist;
            pick = i;
        }
    }
    if (differences) *differences = d;
    if (pick == grid.size()) return {};
    return locate_pair_crossing(family, a, b, grid[pick], grid[pick + 1], opts);
}

// ---------------------------------------------------------------- Floquet

namespace {

double circular_gap(double q1, double q2, double period)
{
    const double full = 2.0 * M_PI / period;
    double d = std::fmod(std::abs(q1 - q2), full);
    return std::min(d, full - d);
}

}  // namespace

FloquetPoint floquet_point(const PeriodicHamiltonian& h, double parameter, Index from, Index to,
                           const PropagationOptions& opts)
{
    const double period = h.period();
    const FloquetSpectrum fs = floquet_spectrum(monodromy(h, opts), period);
    FloquetPoint p;
    p.parameter = parameter;
    p.max_transition = max_transition_probability(fs, from, to);

    const Index n = fs.modes.cols();
    Index mf = 0;
    for (Index j = 1; j < n; ++j) {
        if (std::norm(fs.modes(from, j)) > std::norm(fs.modes(from, mf))) mf = j;
    }
    Index mt = mf == 0 ? 1 : 0;
    for (Index j = 0; j < n; ++j) {
        if (j != mf && std::norm(fs.modes(to, j)) > std::norm(fs.modes(to, mt))) mt = j;
    }
    p.quasienergy_gap = n > 1 ? circular_gap(fs.quasienergies(mf), fs.quasienergies(mt), period) : 0.0;
    return p;
}

std::vector<FloquetPoint> floquet_scan(const PeriodicFamily& family, const std::vector<double>& grid, Index from,
                                       Index to, const PropagationOptions& opts)
{
    std::vector<FloquetPoint> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { out[i] = floquet_point(family(grid[i]), grid[i], from, to, opts); });
    return out;
}

FloquetPoint tune_floquet_resonance(const PeriodicFamily& family, double lo, double hi, Index from, Index to,
                                    const PropagationOptions& opts, double x_tol)
{
    const auto gap = [&](double x) { return floquet_point(family(x), x, from, to, opts).quasienergy_gap; };
    const double x = golden_section_minimize(gap, lo, hi, x_tol);
    return floquet_point(family(x), x, from, to, opts);
}

}  // namespace qres
