#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "qres/cli.hpp"
#include "qres/effective.hpp"
#include "qres/models.hpp"
#include "qres/resonances.hpp"
#include "qres/scan.hpp"
#include "qres/spectral.hpp"

namespace qres::cli {

namespace {

bool wants(const RunConfig& cfg, const std::string& format)
{
    std::stringstream ss(cfg.get_string("output", "formats"));
    std::string f;
    while (std::getline(ss, f, ',')) {
        f.erase(std::remove_if(f.begin(), f.end(), ::isspace), f.end());
        if (f == format) return true;
    }
    return false;
}

std::vector<double> scan_grid(const RunConfig& cfg)
{
    return linspace(cfg.get_double("task", "grid_start"), cfg.get_double("task", "grid_stop"),
                    cfg.get_int("task", "grid_points"));
}

std::vector<double> time_grid(const RunConfig& cfg)
{
    return linspace(0.0, cfg.get_double("task", "t_max"), cfg.get_int("task", "t_points"));
}

Json document(const RunConfig& cfg, const std::string& command)
{
    Json doc;
    doc["command"] = command;
    doc["preset"] = to_string(cfg.preset());
    doc["config"] = cfg.to_json();
    return doc;
}

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string dir) : cfg_(cfg), dir_(std::move(dir)) {}

    void json(const std::string& name, const Json& doc)
    {
        if (!wants(cfg_, "json")) return;
        const std::string path = (std::filesystem::path(dir_) / name).string();
        write_json(path, doc);
        files.push_back(path);
    }

    void csv(const std::string& name, const CsvTable& table)
    {
        if (!wants(cfg_, "csv")) return;
        const std::string path = (std::filesystem::path(dir_) / name).string();
        write_text(path, table.str());
        files.push_back(path);
    }

    void resolved_config()
    {
        const std::string path = (std::filesystem::path(dir_) / "config.ini").string();
        write_text(path, cfg_.to_ini());
        files.push_back(path);
    }

    std::vector<std::string> files;

private:
    const RunConfig& cfg_;
    std::string dir_;
};

Json warnings_json(const std::vector<std::string>& w)
{
    Json arr = Json::array();
    for (const auto& s : w) arr.push_back(s);
    return arr;
}

// ---------------------------------------------------------------- model builders

struct DickeSetup {
    int atoms;
    int n_max;
    double atom_frequency;
    double field_frequency;
    double g;
};

DickeSetup dicke_setup(const RunConfig& cfg)
{
    return {cfg.get_int("model", "atoms"), cfg.get_int("model", "n_max"), cfg.get_double("model", "atom_frequency"),
            cfg.get_double("model", "field_frequency"), cfg.get_double("model", "g")};
}

DiamondParams diamond_params(const RunConfig& cfg)
{
    DiamondParams p;
    const auto e = cfg.get_list("model", "energies");
    const auto g = cfg.get_list("model", "couplings");
    std::copy(e.begin(), e.end(), p.energies.begin());
    std::copy(g.begin(), g.end(), p.g.begin());
    p.omega = cfg.get_double("model", "omega");
    p.atoms = cfg.get_int("model", "atoms");
    p.n_max = cfg.get_int("model", "n_max");
    return p;
}

AtomFieldModel rwa_model(const RunConfig& cfg)
{
    if (cfg.preset() == Preset::diamond) return diamond_model(diamond_params(cfg));
    const DickeSetup s = dicke_setup(cfg);
    if (!(s.atom_frequency > 0.0)) throw ConfigError(cfg.where("model", "atom_frequency") + "'atom_frequency' must be > 0");
    return AtomFieldModel::two_level(0.0, s.atom_frequency, s.g, s.field_frequency, s.atoms, s.n_max);
}

std::string operator_string(const ResonanceVector& k, const AtomFieldModel& model)
{
    const int top = model.levels();
    std::vector<std::string> parts;
    const auto factor = [](const std::string& base, int p) { return p == 1 ? base : "(" + base + ")^" + std::to_string(p); };
    for (std::size_t j = 0; j < k.k.size(); ++j) {
        if (k.k[j] < 0) parts.push_back(factor("S^{" + std::to_string(top) + std::to_string(j + 1) + "}", -k.k[j]));
    }
    for (std::size_t j = 0; j < k.k.size(); ++j) {
        if (k.k[j] > 0) parts.push_back(factor("S^{" + std::to_string(j + 1) + std::to_string(top) + "}", k.k[j]));
    }
    const int kn = photon_exponent(k, model);
    if (kn > 0) parts.push_back(kn == 1 ? "a" : "a^" + std::to_string(kn));
    if (kn < 0) parts.push_back(kn == -1 ? "a^dag" : "(a^dag)^" + std::to_string(-kn));
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s;
}

std::string dynamic_class(int k, int l)
{
    if (k == 1 && l == 0) return "principal";
    if (k == 1) return "odd";
    if (k == 2) return "even";
    return "fractional";
}

// x (atom) and y (field or phase) subsystems of the non-RWA presets
TwoSubsystem nonrwa_space(const RunConfig& cfg)
{
    if (cfg.preset() == Preset::dicke_classical) {
        return dicke_euclid_space(cfg.get_int("model", "atoms"), cfg.get_int("model", "euclid_m"));
    }
    return dicke_space(cfg.get_int("model", "atoms"), cfg.get_int("model", "n_max"));
}

double x_frequency(const RunConfig& cfg)
{
    return cfg.get_double("model", "atom_frequency");
}

double y_frequency(const RunConfig& cfg)
{
    return cfg.preset() == Preset::dicke_classical ? cfg.get_double("model", "drive_frequency")
                                                   : cfg.get_double("model", "field_frequency");
}

// The classical amplitude g multiplies 2 cos(Omega t) in the phase-operator form.
double operator_coupling(const RunConfig& cfg)
{
    const double g = cfg.get_double("model", "g");
    return cfg.preset() == Preset::dicke_classical ? 0.5 * g : g;
}

}  // namespace

// ---------------------------------------------------------------- resonances

CommandResult cmd_resonances(const RunConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    Emitter emit(cfg, out_dir);
    Json doc = document(cfg, "resonances");
    Json rows = Json::array();

    if (cfg.preset() == Preset::dicke_rwa || cfg.preset() == Preset::diamond) {
        const AtomFieldModel model = rwa_model(cfg);
        const AtomFieldSpace space(model);
        CsvTable table({"vector", "photon_exponent", "omega_star", "energy_defect", "frequency_independent",
                        "unphysical", "class", "min_atoms", "realizable", "transition", "operator", "operator_norm"});
        for (const auto& c : enumerate_resonances(model)) {
            const auto op = build_interaction_operator(c.vector, model, space);
            const std::string transition =
                c.transition ? std::to_string(c.transition->first) + "-" + std::to_string(c.transition->second) : "";
            const bool realizable = c.min_atoms <= model.atoms;
            Json row;
            row["vector"] = c.vector.k;
            row["photon_exponent"] = c.photon_exponent;
            row["omega_star"] = c.omega_star ? number(*c.omega_star) : Json(nullptr);
            row["energy_defect"] = number(c.energy_defect);
            row["frequency_independent"] = !c.omega_star.has_value();
            row["unphysical"] = c.unphysical;
            row["class"] = to_string(c.cls);
            row["min_atoms"] = c.min_atoms;
            row["realizable"] = realizable;
            row["transition"] = transition.empty() ? Json(nullptr) : Json(transition);
            row["operator"] = operator_string(c.vector, model);
            row["operator_norm"] = number(op.op.norm());
            rows.push_back(row);
            table.add_row(std::vector<std::string>{c.vector.str(), std::to_string(c.photon_exponent),
                                                   c.omega_star ? format12(*c.omega_star) : "",
                                                   format12(c.energy_defect), c.omega_star ? "false" : "true",
                                                   c.unphysical ? "true" : "false", to_string(c.cls),
                                                   std::to_string(c.min_atoms), realizable ? "true" : "false",
                                                   transition, operator_string(c.vector, model),
                                                   format12(op.op.norm())});
        }
        doc["kind"] = "kinematic";
        emit.csv("resonances.csv", table);
    } else {
        const TwoSubsystem sys = nonrwa_space(cfg);
        const double Omega = y_frequency(cfg);
        const int atoms = cfg.get_int("model", "atoms");
        const int l_max = cfg.get_int("task", "l_max");
        const int y_span = static_cast<int>(sys.y_ladder().labels.size()) - 1;
        CsvTable table({"k", "l", "resonance_ratio", "omega_star", "class", "theta_vanishes", "realizable"});
        for (int k = 1; k <= std::max(3, atoms); ++k) {
            for (int l = 0; l <= l_max; ++l) {
                if (std::gcd(k, l) != 1) continue;
                const auto theta = theta_coefficient(k, l, sys.x_ladder().phi, sys.y_ladder().phi,
                                                     sys.x_ladder().labels, sys.y_ladder().labels);
                const bool vanishes = theta.max_abs() <= 1e-12;
                const bool realizable = !vanishes && k <= atoms && 2 * l + k <= y_span;
                const double ratio = (2.0 * l + k) / k;
                Json row;
                row["k"] = k;
                row["l"] = l;
                row["resonance_ratio"] = number(ratio);
                row["omega_star"] = number(ratio * Omega);
                row["class"] = dynamic_class(k, l);
                row["theta_vanishes"] = vanishes;
                row["realizable"] = realizable;
                rows.push_back(row);
                table.add_row(std::vector<std::string>{std::to_string(k), std::to_string(l), format12(ratio),
                                                       format12(ratio * Omega), dynamic_class(k, l),
                                                       vanishes ? "true" : "false", realizable ? "true" : "false"});
            }
        }
        doc["kind"] = "dynamic";
        emit.csv("resonances.csv", table);
    }
    doc["count"] = rows.size();
    doc["resonances"] = rows;
    emit.json("resonances.json", doc);
    emit.resolved_config();
    log << "resonances: " << rows.size() << " rows\n";
    return {kOk, emit.files};
}

// ---------------------------------------------------------------- effective

CommandResult cmd_effective(const RunConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    Emitter emit(cfg, out_dir);
    Json doc = document(cfg, "effective");
    Json results;
    std::vector<std::string> warnings;

    switch (cfg.preset()) {
    case Preset::dicke_rwa: {
        const DickeSetup s = dicke_setup(cfg);
        const TwoSubsystem d = dicke_space(s.atoms, s.n_max);
        const DickeRwaParams p{s.field_frequency, s.atom_frequency, s.g};
        const OperatorMatrix h = dicke_dispersive(d, p, &warnings);
        results["form"] = "dispersive";
        results["detuning"] = number(p.detuning());
        results["stark_coefficient"] = number(p.g * p.g / p.detuning());
        Json diag = Json::array();
        CsvTable table({"m", "n", "energy"});
        for (Index i = 0; i < d.dim(); ++i) {
            Json e;
            e["m"] = number(d.x_label(i));
            e["n"] = number(d.y_label(i));
            e["energy"] = number(h.matrix()(i, i).real());
            diag.push_back(e);
            table.add_row(std::vector<double>{d.x_label(i), d.y_label(i), h.matrix()(i, i).real()});
        }
        results["dimension"] = d.dim();
        results["diagonal"] = diag;
        emit.csv("effective.csv", table);
        break;
    }
    case Preset::dicke_nonrwa:
    case Preset::dicke_classical: {
        const TwoSubsystem sys = nonrwa_space(cfg);
        const double omega = x_frequency(cfg), Omega = y_frequency(cfg), g = operator_coupling(cfg);
        SeriesOptions opts;
        opts.l_max = cfg.get_int("task", "l_max");
        const EffectiveSeries s = nonrwa_series(sys, omega, Omega, g, opts);
        warnings = s.warnings;
        results["form"] = cfg.preset() == Preset::dicke_classical ? "classical-field series" : "non-RWA series";
        results["g_operator"] = number(g);
        results["epsilon"] = number(s.epsilon);
        results["delta"] = number(s.delta);
        Json stark = Json::array();
        const Index ny = static_cast<Index>(sys.y_ladder().labels.size());
        for (Index i = 0; i < sys.dim(); ++i) {
            const double y = sys.y_label(i);
            if (cfg.preset() == Preset::dicke_classical ? std::abs(y) > 2.0 : y > 4.0) continue;
            Json e;
            e["m"] = number(sys.x_label(i));
            e["n"] = number(y);
            e["energy"] = number(s.diagonal.matrix()(i, i).real());
            stark.push_back(e);
        }
        results["diagonal_samples"] = stark;
        CsvTable table({"k", "l", "resonance_ratio", "omega_star", "class", "prefactor", "theta_min", "theta_max",
                        "coupling"});
        Json terms = Json::array();
        for (const auto& t : s.terms) {
            const RealVector th = t.theta.matrix().diagonal().real();
            // lowest transition |m_min, 2l+k> -> |m_min + k, y0>
            const Index y0 = cfg.preset() == Preset::dicke_classical ? (ny - 1) / 2 - (2 * t.l + t.k) / 2 : 0;
            const Index from = sys.index_of(0, y0 + 2 * t.l + t.k);
            const Index to = sys.index_of(t.k, y0);
            const double coupling = t.prefactor * t.operator_.matrix()(to, from).real();
            Json row;
            row["k"] = t.k;
            row["l"] = t.l;
            row["resonance_ratio"] = number(t.resonance_ratio());
            row["omega_star"] = number(t.resonance_ratio() * Omega);
            row["class"] = dynamic_class(t.k, t.l);
            row["prefactor"] = number(t.prefactor);
            row["theta_min"] = number(th.minCoeff());
            row["theta_max"] = number(th.maxCoeff());
            row["coupling"] = number(coupling);
            terms.push_back(row);
            table.add_row(std::vector<std::string>{std::to_string(t.k), std::to_string(t.l),
                                                   format12(t.resonance_ratio()),
                                                   format12(t.resonance_ratio() * Omega), dynamic_class(t.k, t.l),
                                                   format12(t.prefactor), format12(th.minCoeff()),
                                                   format12(th.maxCoeff()), format12(coupling)});
        }
        results["terms"] = terms;
        emit.csv("effective.csv", table);
        break;
    }
    case Preset::diamond: {
        const DiamondParams p = diamond_params(cfg);
        const AtomFieldSpace space(diamond_model(p));
        const OperatorMatrix h = diamond_first_order(p, space, &warnings);
        const auto d = p.denominators();
        const auto e = p.epsilons();
        const auto& g = p.g;
        results["form"] = "diamond first order";
        Json den = Json::array(), eps = Json::array();
        for (std::size_t c = 0; c < 4; ++c) {
            den.push_back(number(d[c]));
            eps.push_back(number(e[c]));
        }
        results["denominators"] = den;
        results["epsilons"] = eps;
        Json coeff;
        coeff["photon_assisted_23_lower"] = number(g[1] * e[0]);
        coeff["photon_assisted_23_upper"] = number(g[3] * e[2]);
        coeff["two_photon_14"] = number(-(g[2] * e[0] + g[3] * e[1]));
        coeff["virtual_24_12"] = number(g[2] * e[0]);
        coeff["virtual_24_13"] = number(g[2] * e[1]);
        coeff["virtual_12_34"] = number(g[3] * e[0]);
        coeff["virtual_13_34"] = number(g[3] * e[1]);
        results["coefficients"] = coeff;

        RealVector mask(space.dim());
        for (Index i = 0; i < space.dim(); ++i) mask(i) = (i % (p.n_max + 1)) <= p.n_max - 2 ? 1.0 : 0.0;
        const OperatorMatrix exact = diamond_exact_conjugation(p, space);
        results["residual_vs_exact_conjugation"] = number((exact - h).masked(mask).norm());

        CsvTable table({"term", "coefficient"});
        for (const auto& [k, v] : coeff.items()) table.add_row(std::vector<std::string>{k, format12(v.get<double>())});
        emit.csv("effective.csv", table);
        break;
    }
    }
    results["warnings"] = warnings_json(warnings);
    doc["results"] = results;
    emit.json("effective.json", doc);
    emit.resolved_config();
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    return {kOk, emit.files};
}

// ---------------------------------------------------------------- scan

namespace {

Json peak_json(const ResonancePeak& p)
{
    Json j;
    j["label"] = p.label;
    j["predicted"] = number(p.predicted);
    j["measured"] = p.found ? number(p.measured) : Json(nullptr);
    j["gap"] = p.found ? number(p.gap) : Json(nullptr);
    j["rel_error"] = p.found ? number(p.rel_error) : Json(nullptr);
    j["found"] = p.found;
    j["truncation_limited"] = p.truncation_limited;
    return j;
}

void finish_peak(ResonancePeak& peak, const PairCrossing& pc)
{
    peak.found = pc.found;
    if (!pc.found) return;
    peak.measured = pc.location;
    peak.gap = pc.gap;
    peak.rel_error = std::abs(pc.location - peak.predicted) / std::max(std::abs(peak.predicted), 1e-300);
}

// Re-locates a crossing with a 50% larger truncation; a shift above 1% marks the peak.
void truncation_check(ResonancePeak& peak, const PairCrossing& pc, const HamiltonianFamily& larger, Index a, Index b,
                      double cell)
{
    if (!pc.found) return;
    const PairCrossing again = locate_pair_crossing(larger, a, b, pc.location - cell, pc.location + cell);
    peak.truncation_limited = !again.found || std::abs(again.location - pc.location) > 0.01 * std::abs(pc.location);
}

CsvTable level_table(const std::vector<double>& grid, const std::vector<RealVector>& levels, const std::string& param)
{
    std::vector<std::string> header{param};
    const Index n = levels.empty() ? 0 : levels.front().size();
    for (Index i = 0; i < n; ++i) header.push_back("level_" + std::to_string(i));
    CsvTable t(header);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        std::vector<double> row{grid[r]};
        for (Index i = 0; i < n; ++i) row.push_back(levels[r](i));
        t.add_row(row);
    }
    return t;
}

}  // namespace

CommandResult cmd_scan(const RunConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    Emitter emit(cfg, out_dir);
    Json doc = document(cfg, "scan");
    const auto grid = scan_grid(cfg);
    const double cell = grid[1] - grid[0];
    std::vector<ResonancePeak> peaks;
    Json skipped = Json::array();
    std::string parameter;

    switch (cfg.preset()) {
    case Preset::dicke_rwa: {
        const DickeSetup s = dicke_setup(cfg);
        parameter = "field_frequency";
        const auto make = [s](int n_max) {
            const TwoSubsystem d = dicke_space(s.atoms, n_max);
            return HamiltonianFamily([s, d](double w) { return dicke_rwa(d, {w, s.atom_frequency, s.g}); });
        };
        const TwoSubsystem d = dicke_space(s.atoms, s.n_max);
        const TwoSubsystem big = dicke_space(s.atoms, (3 * s.n_max + 1) / 2);
        const HamiltonianFamily family = make(s.n_max);
        ResonancePeak peak;
        peak.label = "explicit omega = omega_0";
        peak.predicted = s.atom_frequency;
        const Index a = d.index_of(s.atoms, 0), b = d.index_of(s.atoms - 1, 1);
        const PairCrossing pc = scan_pair_crossing(family, a, b, grid, peak.predicted);
        finish_peak(peak, pc);
        truncation_check(peak, pc, make(big.space().factor(1).size_parameter()), big.index_of(s.atoms, 0),
                         big.index_of(s.atoms - 1, 1), cell);
        peaks.push_back(peak);
        emit.csv("scan.csv", level_table(grid, track_levels(family, grid), parameter));
        break;
    }
    case Preset::dicke_nonrwa: {
        const DickeSetup s = dicke_setup(cfg);
        parameter = "atom_frequency";
        const int l_max = cfg.get_int("task", "l_max");
        const double Omega = s.field_frequency;
        const auto full = [s](int n_max) {
            const TwoSubsystem d = dicke_space(s.atoms, n_max);
            return HamiltonianFamily([s, d](double w) { return dicke_nonrwa(d, w, s.field_frequency, s.g); });
        };
        const TwoSubsystem d = dicke_space(s.atoms, s.n_max);
        const int big_n = (3 * s.n_max + 1) / 2;
        const TwoSubsystem big = dicke_space(s.atoms, big_n);
        SeriesOptions opts;
        opts.l_max = l_max;
        const HamiltonianFamily effective = [s, d, opts](double w) {
            return nonrwa_series(d, w, s.field_frequency, s.g, opts).assemble();
        };
        std::vector<double> eff_grid;
        for (double w : grid) {
            if (w >= Omega) eff_grid.push_back(w);
        }
        const HamiltonianFamily family = full(s.n_max);
        for (int k = 1; k <= std::min(s.atoms, 2); ++k) {
            for (int l = 0; l <= l_max; ++l) {
                if (std::gcd(k, l) != 1 || 2 * l + k > s.n_max) continue;
                const double bare = (2.0 * l + k) / k * Omega;
                if (bare < grid.front() || bare > grid.back()) continue;
                ResonancePeak peak;
                peak.label = "k=" + std::to_string(k) + " l=" + std::to_string(l);
                const Index a = d.index_of(0, 2 * l + k), b = d.index_of(k, 0);
                peak.predicted = bare;
                if (eff_grid.size() >= 2) {
                    const PairCrossing pe = scan_pair_crossing(effective, a, b, eff_grid, bare);
                    if (pe.found) peak.predicted = pe.location;
                }
                const PairCrossing pc = scan_pair_crossing(family, a, b, grid, peak.predicted);
                finish_peak(peak, pc);
                truncation_check(peak, pc, full(big_n), big.index_of(0, 2 * l + k), big.index_of(k, 0), cell);
                peaks.push_back(peak);
            }
        }
        emit.csv("scan.csv", level_table(grid, track_levels(family, grid), parameter));
        break;
    }
    case Preset::dicke_classical: {
        parameter = "atom_frequency";
        const int atoms = cfg.get_int("model", "atoms");
        const double Omega = cfg.get_double("model", "drive_frequency");
        const double g = cfg.get_double("model", "g");
        PropagationOptions prop;
        prop.steps_per_period = cfg.get_int("task", "steps_per_period");
        const PeriodicFamily family = [atoms, Omega, g](double w) { return dicke_classical(atoms, w, Omega, g); };
        const auto points = floquet_scan(family, grid, 0, 1, prop);
        CsvTable table({parameter, "max_transition", "quasienergy_gap"});
        for (const auto& p : points) table.add_row(std::vector<double>{p.parameter, p.max_transition, p.quasienergy_gap});
        emit.csv("scan.csv", table);

        const int m = cfg.get_int("model", "euclid_m");
        const TwoSubsystem e = dicke_euclid_space(atoms, m);
        SeriesOptions opts;
        opts.l_max = cfg.get_int("task", "l_max");
        for (int l = 0; l <= opts.l_max; ++l) {
            const double bare = (2.0 * l + 1.0) * Omega;
            if (bare < grid.front() || bare > grid.back() || 2 * l + 1 > m) continue;
            ResonancePeak peak;
            peak.label = "k=1 l=" + std::to_string(l);
            // shifted position: crossing of the phase-operator effective Hamiltonian
            const Index a = e.index_of(0, m + l + 1), b = e.index_of(1, m - l);
            const HamiltonianFamily effective = [&](double w) {
                return nonrwa_series(e, w, Omega, 0.5 * g, opts).assemble();
            };
            peak.predicted = bare;
            const double lo = std::max(bare - 0.2 * Omega, Omega * (1.0 + 1e-9));
            if (lo < bare) {
                const PairCrossing pe = scan_pair_crossing(effective, a, b, linspace(lo, bare + 0.2 * Omega, 81), bare);
                if (pe.found) peak.predicted = pe.location;
            }
            const double wlo = std::max(grid.front(), bare - 0.4 * Omega);
            const double whi = std::min(grid.back(), bare + 0.4 * Omega);
            const FloquetPoint tuned = tune_floquet_resonance(family, wlo, whi, 0, 1, prop);
            peak.found = tuned.max_transition >= 0.5;
            peak.measured = tuned.parameter;
            peak.gap = tuned.quasienergy_gap;
            peak.rel_error = std::abs(peak.measured - peak.predicted) / peak.predicted;
            peaks.push_back(peak);
            if (!peak.found) continue;
            Json extra;
            extra["label"] = peak.label;
            extra["max_transition"] = number(tuned.max_transition);
            skipped.push_back(extra);
        }
        break;
    }
    case Preset::diamond: {
        parameter = "omega";
        const DiamondParams p = diamond_params(cfg);
        const AtomFieldModel model = diamond_model(p);
        const auto make = [model](int n_max) {
            AtomFieldModel m = model;
            m.n_max = n_max;
            const AtomFieldSpace space(m);
            return std::make_pair(HamiltonianFamily([m, space](double w) {
                                      AtomFieldModel mw = m;
                                      mw.omega = w;
                                      return rwa_hamiltonian(mw, space);
                                  }),
                                  space);
        };
        const auto [family, space] = make(p.n_max);
        const int big_n = (3 * p.n_max + 1) / 2;
        const auto [big_family, big_space] = make(big_n);
        for (const auto& c : enumerate_resonances(model)) {
            Json why;
            why["vector"] = c.vector.k;
            if (!c.omega_star) {
                why["reason"] = "frequency-independent";
                skipped.push_back(why);
                continue;
            }
            if (c.min_atoms > p.atoms) {
                why["reason"] = "needs more atoms";
                skipped.push_back(why);
                continue;
            }
            if (*c.omega_star < grid.front() || *c.omega_star > grid.back()) {
                why["reason"] = "outside grid";
                skipped.push_back(why);
                continue;
            }
            // diabatic pair: lowest-photon source state connected by the interaction operator
            const OperatorMatrix op = build_interaction_operator(c.vector, model, space).op;
            Index src = -1, dst = -1;
            int best_photons = std::numeric_limits<int>::max();
            for (Index j = 0; j < space.dim(); ++j) {
                Index i;
                const double amp = op.matrix().col(j).cwiseAbs().maxCoeff(&i);
                const int photons = static_cast<int>(j % (p.n_max + 1));
                if (amp > 0.0 && photons < best_photons) {
                    best_photons = photons;
                    src = j;
                    dst = i;
                }
            }
            ResonancePeak peak;
            peak.label = c.vector.str() + " " + to_string(c.cls);
            peak.predicted = *c.omega_star;
            const PairCrossing pc = scan_pair_crossing(family, dst, src, grid, peak.predicted);
            finish_peak(peak, pc);
            // the same occupations and photon numbers in the enlarged space
            const auto remap = [&](Index flat) {
                const auto idx = space.space().unflatten(flat);
                return big_space.space().flat_index({idx[0], idx[1]});
            };
            truncation_check(peak, pc, big_family, remap(dst), remap(src), cell);
            peaks.push_back(peak);
        }
        emit.csv("scan.csv", level_table(grid, track_levels(family, grid), parameter));
        break;
    }
    }

    bool limited = false;
    Json arr = Json::array();
    for (const auto& p : peaks) {
        arr.push_back(peak_json(p));
        limited = limited || p.truncation_limited;
    }
    doc["parameter"] = parameter;
    doc["grid_points"] = grid.size();
    doc["peaks"] = arr;
    doc[cfg.preset() == Preset::dicke_classical ? "peak_heights" : "skipped"] = skipped;
    doc["truncation_limited"] = limited;
    emit.json("peaks.json", doc);
    emit.resolved_config();
    for (const auto& p : peaks) {
        log << p.label << ": predicted " << format12(p.predicted);
        if (p.found) log << " measured " << format12(p.measured) << " gap " << format12(p.gap);
        else log << " not found";
        log << (p.truncation_limited ? " [truncation-limited]" : "") << "\n";
    }
    return {limited ? kTruncationLimited : kOk, emit.files};
}

// ---------------------------------------------------------------- evolve

CommandResult cmd_evolve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    Emitter emit(cfg, out_dir);
    Json doc = document(cfg, "evolve");
    const auto times = time_grid(cfg);
    const double leakage_tol = cfg.get_double("task", "leakage_tol");
    Json summary;
    double max_leak = 0.0;

    switch (cfg.preset()) {
    case Preset::dicke_rwa:
    case Preset::dicke_nonrwa: {
        const DickeSetup s = dicke_setup(cfg);
        const TwoSubsystem d = dicke_space(s.atoms, s.n_max);
        const OperatorMatrix h = cfg.preset() == Preset::dicke_rwa
                                     ? dicke_rwa(d, {s.field_frequency, s.atom_frequency, s.g})
                                     : dicke_nonrwa(d, s.atom_frequency, s.field_frequency, s.g);
        const Index x0 = cfg.get_string("task", "initial") == "excited" ? s.atoms : 0;
        Vector psi0 = Vector::Zero(d.dim());
        psi0(d.index_of(x0, cfg.get_int("task", "initial_photons"))) = 1.0;
        const EvolutionResult r = evolve(h, psi0, times, d.interior());

        const OperatorMatrix excitation = dicke_excitation_number(d);
        std::optional<IntegralOfMotion> nkl;
        std::vector<std::string> header{"t", "P_transition", "Sz", "n", "excitation", "leakage"};
        if (cfg.preset() == Preset::dicke_nonrwa) {
            nkl = integral_of_motion_Nkl(1, cfg.get_int("task", "integral_l"), d, s.g / (2.0 * s.field_frequency));
            header.push_back("N_kl");
        }
        CsvTable table(header);
        const auto sz = r.observable(d.x0());
        const auto n = r.observable(d.y0());
        const auto ex = r.observable(excitation);
        std::vector<double> nk = nkl ? r.observable(nkl->op) : std::vector<double>{};
        double p_max = 0.0, drift = 0.0, nk_drift = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            double stay = 0.0;
            for (int photons = 0; photons <= s.n_max; ++photons) stay += std::norm(r.states[i](d.index_of(x0, photons)));
            const double p = std::max(0.0, 1.0 - stay);
            p_max = std::max(p_max, p);
            drift = std::max(drift, std::abs(ex[i] - ex[0]));
            std::vector<double> row{times[i], p, sz[i], n[i], ex[i], r.leakage[i]};
            if (nkl) {
                row.push_back(nk[i]);
                nk_drift = std::max(nk_drift, std::abs(nk[i] - nk[0]));
            }
            table.add_row(row);
        }
        summary["max_transition"] = number(p_max);
        summary["excitation_drift"] = number(drift);
        if (nkl) summary["integral_of_motion_drift"] = number(nk_drift);
        summary["max_norm_drift"] = number(r.max_norm_drift);
        max_leak = r.max_leakage();
        emit.csv("evolve.csv", table);
        break;
    }
    case Preset::dicke_classical: {
        const int atoms = cfg.get_int("model", "atoms");
        const PeriodicHamiltonian h = dicke_classical(atoms, cfg.get_double("model", "atom_frequency"),
                                                      cfg.get_double("model", "drive_frequency"),
                                                      cfg.get_double("model", "g"));
        PropagationOptions prop;
        prop.steps_per_period = cfg.get_int("task", "steps_per_period");
        const Index x0 = cfg.get_string("task", "initial") == "excited" ? atoms : 0;
        Vector psi0 = Vector::Zero(h.dim());
        psi0(x0) = 1.0;
        const EvolutionResult r = evolve(h, psi0, times, prop);
        const Ladder s = build_ladder(Representation::spin(atoms));
        const auto sz = r.observable(s.x0);
        CsvTable table({"t", "P_transition", "Sz"});
        double p_max = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double p = std::max(0.0, 1.0 - std::norm(r.states[i](x0)));
            p_max = std::max(p_max, p);
            table.add_row(std::vector<double>{times[i], p, sz[i]});
        }
        summary["max_transition"] = number(p_max);
        summary["max_norm_drift"] = number(r.max_norm_drift);
        summary["step_halving_change"] = number(r.step_halving_change);
        emit.csv("evolve.csv", table);
        break;
    }
    case Preset::diamond: {
        const DiamondParams p = diamond_params(cfg);
        const AtomFieldModel model = diamond_model(p);
        const AtomFieldSpace space(model);
        const auto occ_d = cfg.get_list("task", "initial_occupation");
        std::vector<int> occ;
        for (double x : occ_d) occ.push_back(static_cast<int>(x));
        Vector psi0 = Vector::Zero(space.dim());
        psi0(space.basis_index(occ, cfg.get_int("task", "initial_photons"))) = 1.0;
        const EvolutionResult r = evolve(rwa_hamiltonian(model, space), psi0, times, space.interior());
        std::vector<std::vector<double>> pops;
        for (int j = 1; j <= 4; ++j) pops.push_back(r.observable(space.S(j, j)));
        const auto n = r.observable(space.photon_number());
        const auto ex = r.observable(space.excitation_number(model.mu));
        CsvTable table({"t", "pop_1", "pop_2", "pop_3", "pop_4", "n", "excitation", "leakage"});
        double drift = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::vector<double> row{times[i]};
            for (int j = 0; j < 4; ++j) row.push_back(pops[static_cast<std::size_t>(j)][i] / p.atoms);
            row.push_back(n[i]);
            row.push_back(ex[i]);
            row.push_back(r.leakage[i]);
            drift = std::max(drift, std::abs(ex[i] - ex[0]));
            table.add_row(row);
        }
        summary["excitation_drift"] = number(drift);
        summary["max_norm_drift"] = number(r.max_norm_drift);
        max_leak = r.max_leakage();
        emit.csv("evolve.csv", table);
        break;
    }
    }
    const bool limited = max_leak > leakage_tol;
    summary["max_leakage"] = number(max_leak);
    summary["truncation_limited"] = limited;
    doc["summary"] = summary;
    emit.json("evolve.json", doc);
    emit.resolved_config();
    if (limited) log << "truncation-limited: leakage " << format12(max_leak) << " exceeds " << format12(leakage_tol) << "\n";
    return {limited ? kTruncationLimited : kOk, emit.files};
}

// ---------------------------------------------------------------- entry point

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"qres: resonances and effective Hamiltonians of atom-field models"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    std::string config_path, out_dir, preset_name;
    bool seedless = false;
    app.add_option("--config", config_path, "Sectioned key = value configuration file");
    app.add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    app.add_option("--preset", preset_name, "Model preset")
        ->check(CLI::IsMember({"dicke-rwa", "dicke-nonrwa", "dicke-classical", "diamond"}));
    app.add_flag("--seedless", seedless, "Accepted for compatibility; every run is deterministic");
    app.add_subcommand("resonances", "Enumerate and classify resonance conditions");
    app.add_subcommand("effective", "Build the effective Hamiltonian");
    app.add_subcommand("scan", "Sweep a frequency and locate resonances");
    app.add_subcommand("evolve", "Time evolution under the full Hamiltonian");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        std::optional<Preset> preset;
        if (!preset_name.empty()) preset = parse_preset(preset_name);
        RunConfig cfg = !config_path.empty() ? RunConfig::from_file(config_path, preset)
                        : preset               ? RunConfig::from_preset(*preset)
                                               : throw ConfigError("either --config or --preset is required");
        if (!out_dir.empty()) cfg.set("output", "dir", out_dir);
        const std::string dir = cfg.get_string("output", "dir");
        const std::string name = app.get_subcommands().front()->get_name();
        CommandResult r;
        if (name == "resonances") r = cmd_resonances(cfg, dir, out);
        else if (name == "effective") r = cmd_effective(cfg, dir, out);
        else if (name == "scan") r = cmd_scan(cfg, dir, out);
        else r = cmd_evolve(cfg, dir, out);
        for (const auto& f : r.files) out << "wrote " << f << "\n";
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ModelError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const RegimeError& e) {
        err << "refused: " << e.what() << "\n";
        return kResonantRefusal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace qres::cli
