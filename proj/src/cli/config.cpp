#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qres/cli.hpp"

namespace qres::cli {

namespace {

enum class Kind { integer, real, list, text };

struct KeySpec {
    const char* section;
    const char* key;
    Kind kind;
    // default per preset (rwa, nonrwa, classical, diamond); nullptr: not valid for that preset
    std::array<const char*, 4> defaults;
};

constexpr const char* kNo = nullptr;

const std::vector<KeySpec>& schema()
{
    static const std::vector<KeySpec> keys{
        {"model", "atoms", Kind::integer, {"1", "2", "1", "1"}},
        {"model", "n_max", Kind::integer, {"8", "20", kNo, "4"}},
        {"model", "atom_frequency", Kind::real, {"1.5", "3", "3", kNo}},
        {"model", "field_frequency", Kind::real, {"1", "1", kNo, kNo}},
        {"model", "drive_frequency", Kind::real, {kNo, kNo, "1", kNo}},
        {"model", "g", Kind::real, {"0.01", "0.02", "0.05", kNo}},
        {"model", "energies", Kind::list, {kNo, kNo, kNo, "0,0.7,1.4,2.3"}},
        {"model", "couplings", Kind::list, {kNo, kNo, kNo, "0.01,0.011,0.009,0.012"}},
        {"model", "omega", Kind::real, {kNo, kNo, kNo, "0.2"}},
        {"model", "euclid_m", Kind::integer, {kNo, kNo, "10", kNo}},
        {"task", "l_max", Kind::integer, {kNo, "2", "2", kNo}},
        {"task", "grid_start", Kind::real, {"1.4", "2.95", "0.8", "0.5"}},
        {"task", "grid_stop", Kind::real, {"1.6", "3.05", "3.2", "1.7"}},
        {"task", "grid_points", Kind::integer, {"41", "21", "49", "25"}},
        {"task", "t_max", Kind::real, {"400", "400", "200", "400"}},
        {"task", "t_points", Kind::integer, {"201", "201", "201", "201"}},
        {"task", "initial", Kind::text, {"excited", "ground", "ground", kNo}},
        {"task", "initial_photons", Kind::integer, {"0", "3", kNo, "2"}},
        {"task", "initial_occupation", Kind::list, {kNo, kNo, kNo, "1,0,0,0"}},
        {"task", "integral_l", Kind::integer, {kNo, "1", kNo, kNo}},
        {"task", "steps_per_period", Kind::integer, {kNo, kNo, "2000", kNo}},
        {"task", "leakage_tol", Kind::real, {"1e-6", "1e-6", "1e-6", "1e-6"}},
        {"output", "dir", Kind::text, {"qres-out", "qres-out", "qres-out", "qres-out"}},
        {"output", "formats", Kind::text, {"csv,json", "csv,json", "csv,json", "csv,json"}},
    };
    return keys;
}

const std::array<const char*, 3> kSections{"model", "task", "output"};

const KeySpec* find_spec(const std::string& section, const std::string& key)
{
    for (const auto& s : schema()) {
        if (section == s.section && key == s.key) return &s;
    }
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line)
{
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') return "";
    for (std::size_t i = 1; i < t.size(); ++i) {
        if ((t[i] == '#' || t[i] == ';') && (t[i - 1] == ' ' || t[i - 1] == '\t')) return trim(t.substr(0, i));
    }
    return t;
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out)
{
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size() || v < -1000000 || v > 1000000) return false;
    out = static_cast<int>(v);
    return true;
}

bool parse_list(const std::string& s, std::vector<double>& out)
{
    out.clear();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_double(trim(item), v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

bool check_kind(Kind kind, const std::string& value)
{
    double d = 0.0;
    int i = 0;
    std::vector<double> l;
    switch (kind) {
    case Kind::integer: return parse_int(value, i);
    case Kind::real: return parse_double(value, d);
    case Kind::list: return parse_list(value, l);
    case Kind::text: return !value.empty();
    }
    return false;
}

const char* kind_name(Kind kind)
{
    switch (kind) {
    case Kind::integer: return "an integer";
    case Kind::real: return "a number";
    case Kind::list: return "a comma-separated list of numbers";
    case Kind::text: return "a non-empty string";
    }
    return "a value";
}

}  // namespace

std::string to_string(Preset p)
{
    switch (p) {
    case Preset::dicke_rwa: return "dicke-rwa";
    case Preset::dicke_nonrwa: return "dicke-nonrwa";
    case Preset::dicke_classical: return "dicke-classical";
    case Preset::diamond: return "diamond";
    }
    return "unknown";
}

std::optional<Preset> parse_preset(const std::string& name)
{
    for (Preset p : {Preset::dicke_rwa, Preset::dicke_nonrwa, Preset::dicke_classical, Preset::diamond}) {
        if (name == to_string(p)) return p;
    }
    return std::nullopt;
}

RunConfig RunConfig::from_preset(Preset preset)
{
    RunConfig c;
    c.preset_ = preset;
    c.fill_defaults();
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path, std::optional<Preset> preset_override)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path, preset_override);
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& source,
                               std::optional<Preset> preset_override)
{
    struct Raw {
        std::string section, key, value;
        int line;
    };
    std::vector<Raw> raw;
    std::set<std::pair<std::string, std::string>> seen;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    const auto fail = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip_comment(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail("malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
                fail("unknown section [" + section + "] (expected [model], [task] or [output])");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + t + "'");
        if (section.empty()) fail("key outside of a section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (!seen.insert({section, key}).second) fail("duplicate key '" + key + "' in [" + section + "]");
        raw.push_back({section, key, value, lineno});
    }

    RunConfig c;
    c.source_ = source;
    std::optional<Preset> preset = preset_override;
    for (const auto& r : raw) {
        if (r.section == "model" && r.key == "preset") {
            lineno = r.line;
            const auto p = parse_preset(r.value);
            if (!p) fail("unknown preset '" + r.value + "' (dicke-rwa, dicke-nonrwa, dicke-classical, diamond)");
            if (!preset) preset = p;
        }
    }
    if (!preset) throw ConfigError(source + ": no preset selected; set [model] preset or pass --preset");
    c.preset_ = *preset;
    c.fill_defaults();
    const auto idx = static_cast<std::size_t>(c.preset_);
    for (const auto& r : raw) {
        lineno = r.line;
        if (r.section == "model" && r.key == "preset") continue;
        const KeySpec* spec = find_spec(r.section, r.key);
        if (!spec || spec->defaults[idx] == nullptr) {
            fail("unknown key '" + r.key + "' in [" + r.section + "] for preset " + to_string(c.preset_));
        }
        if (!check_kind(spec->kind, r.value)) fail("'" + r.key + "' must be " + kind_name(spec->kind));
        c.values_[r.section][r.key] = {r.value, r.line};
    }
    // unless given, every atom starts in the lowest level
    if (c.has("task", "initial_occupation") && c.values_["task"]["initial_occupation"].line == 0) {
        c.values_["task"]["initial_occupation"].value = c.get_string("model", "atoms") + ",0,0,0";
    }
    c.validate();
    return c;
}

void RunConfig::fill_defaults()
{
    values_.clear();
    const auto idx = static_cast<std::size_t>(preset_);
    for (const auto& s : schema()) {
        if (s.defaults[idx] != nullptr) values_[s.section][s.key] = {s.defaults[idx], 0};
    }
}

bool RunConfig::has(const std::string& section, const std::string& key) const
{
    const auto it = values_.find(section);
    return it != values_.end() && it->second.count(key) > 0;
}

std::string RunConfig::where(const std::string& section, const std::string& key) const
{
    if (has(section, key)) {
        const int line = values_.at(section).at(key).line;
        if (line > 0) return source_ + ":" + std::to_string(line) + ": ";
    }
    return source_ + ": ";
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const
{
    if (!has(section, key)) throw ConfigError(source_ + ": key '" + key + "' is not available for this preset");
    return values_.at(section).at(key).value;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const
{
    double v = 0.0;
    if (!parse_double(get_string(section, key), v)) throw ConfigError(where(section, key) + "'" + key + "' must be a number");
    return v;
}

int RunConfig::get_int(const std::string& section, const std::string& key) const
{
    int v = 0;
    if (!parse_int(get_string(section, key), v)) throw ConfigError(where(section, key) + "'" + key + "' must be an integer");
    return v;
}

std::vector<double> RunConfig::get_list(const std::string& section, const std::string& key) const
{
    std::vector<double> v;
    if (!parse_list(get_string(section, key), v)) {
        throw ConfigError(where(section, key) + "'" + key + "' must be a comma-separated list of numbers");
    }
    return v;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value)
{
    const KeySpec* spec = find_spec(section, key);
    if (!spec || spec->defaults[static_cast<std::size_t>(preset_)] == nullptr) {
        throw ConfigError(source_ + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (!check_kind(spec->kind, value)) throw ConfigError(source_ + ": '" + key + "' must be " + kind_name(spec->kind));
    values_[section][key] = {value, 0};
    validate();
}

void RunConfig::validate() const
{
    const auto require = [&](bool ok, const std::string& section, const std::string& key, const std::string& msg) {
        if (!ok) throw ConfigError(where(section, key) + msg);
    };
    const int atoms = get_int("model", "atoms");
    require(atoms >= 1 && atoms <= 64, "model", "atoms", "'atoms' must lie in 1..64");
    if (has("model", "n_max")) {
        const int n = get_int("model", "n_max");
        require(n >= 1 && n <= 400, "model", "n_max", "'n_max' must lie in 1..400");
    }
    for (const char* key : {"atom_frequency", "field_frequency", "drive_frequency", "omega"}) {
        if (has("model", key)) require(get_double("model", key) >= 0.0, "model", key, std::string("'") + key + "' must be >= 0");
    }
    if (has("model", "drive_frequency")) {
        require(get_double("model", "drive_frequency") > 0.0, "model", "drive_frequency", "'drive_frequency' must be > 0");
    }
    if (has("model", "g")) require(get_double("model", "g") >= 0.0, "model", "g", "'g' must be >= 0");
    if (has("model", "euclid_m")) {
        const int m = get_int("model", "euclid_m");
        require(m >= 1 && m <= 200, "model", "euclid_m", "'euclid_m' must lie in 1..200");
    }
    if (has("model", "energies")) {
        const auto e = get_list("model", "energies");
        require(e.size() == 4, "model", "energies", "'energies' needs four values E1,E2,E3,E4");
        require(std::is_sorted(e.begin(), e.end()) && std::adjacent_find(e.begin(), e.end()) == e.end(), "model",
                "energies", "'energies' must be strictly increasing");
    }
    if (has("model", "couplings")) {
        const auto g = get_list("model", "couplings");
        require(g.size() == 4, "model", "couplings", "'couplings' needs four values for channels 1-2,1-3,2-4,3-4");
        for (double x : g) require(x >= 0.0, "model", "couplings", "'couplings' must be >= 0");
    }

    if (has("task", "l_max")) {
        const int l = get_int("task", "l_max");
        require(l >= 0 && l <= 12, "task", "l_max", "'l_max' must lie in 0..12");
    }
    const int points = get_int("task", "grid_points");
    require(points >= 2, "task", "grid_points", "'grid_points' must be >= 2 (the grid is empty)");
    require(points <= 100000, "task", "grid_points", "'grid_points' is too large");
    require(get_double("task", "grid_stop") > get_double("task", "grid_start"), "task", "grid_stop",
            "'grid_stop' must exceed 'grid_start'");
    require(get_double("task", "t_max") >= 0.0, "task", "t_max", "'t_max' must be >= 0");
    const int tp = get_int("task", "t_points");
    require(tp >= 1 && tp <= 1000000, "task", "t_points", "'t_points' must lie in 1..1000000");
    if (has("task", "initial")) {
        const auto s = get_string("task", "initial");
        require(s == "ground" || s == "excited", "task", "initial", "'initial' must be 'ground' or 'excited'");
    }
    if (has("task", "initial_photons")) {
        const int p = get_int("task", "initial_photons");
        require(p >= 0 && p <= get_int("model", "n_max"), "task", "initial_photons",
                "'initial_photons' must lie in 0..n_max");
    }
    if (has("task", "initial_occupation")) {
        const auto occ = get_list("task", "initial_occupation");
        bool ok = occ.size() == 4;
        double sum = 0.0;
        for (double x : occ) {
            ok = ok && x >= 0.0 && x == std::floor(x);
            sum += x;
        }
        require(ok && sum == atoms, "task", "initial_occupation",
                "'initial_occupation' needs four non-negative integers summing to 'atoms'");
    }
    if (has("task", "integral_l")) {
        require(get_int("task", "integral_l") >= 1, "task", "integral_l", "'integral_l' must be >= 1");
    }
    if (has("task", "steps_per_period")) {
        const int s = get_int("task", "steps_per_period");
        require(s >= 1 && s <= 1000000, "task", "steps_per_period", "'steps_per_period' must lie in 1..1000000");
    }
    require(get_double("task", "leakage_tol") > 0.0, "task", "leakage_tol", "'leakage_tol' must be > 0");

    std::stringstream fs(get_string("output", "formats"));
    std::string f;
    int count = 0;
    while (std::getline(fs, f, ',')) {
        f = trim(f);
        require(f == "csv" || f == "json", "output", "formats", "'formats' accepts csv and json");
        ++count;
    }
    require(count > 0, "output", "formats", "'formats' is empty");
}

Json RunConfig::to_json() const
{
    Json doc;
    doc["preset"] = to_string(preset_);
    for (const char* section : kSections) {
        Json sec = Json::object();
        for (const auto& s : schema()) {
            if (section != std::string(s.section) || !has(s.section, s.key)) continue;
            switch (s.kind) {
            case Kind::integer: sec[s.key] = get_int(s.section, s.key); break;
            case Kind::real: sec[s.key] = number(get_double(s.section, s.key)); break;
            case Kind::list: {
                Json arr = Json::array();
                for (double x : get_list(s.section, s.key)) arr.push_back(number(x));
                sec[s.key] = arr;
                break;
            }
            case Kind::text: sec[s.key] = get_string(s.section, s.key); break;
            }
        }
        doc[section] = sec;
    }
    return doc;
}

std::string RunConfig::to_ini() const
{
    std::ostringstream out;
    for (const char* section : kSections) {
        out << "[" << section << "]\n";
        if (std::string(section) == "model") out << "preset = " << to_string(preset_) << "\n";
        for (const auto& s : schema()) {
            if (section == std::string(s.section) && has(s.section, s.key)) {
                out << s.key << " = " << get_string(s.section, s.key) << "\n";
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qres::cli
