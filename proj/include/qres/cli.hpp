// cli.hpp — run configuration, report writers and the qres subcommands

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qres/operator.hpp"

namespace qres::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kResonantRefusal = 3,
    kTruncationLimited = 4,
};

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Preset { dicke_rwa, dicke_nonrwa, dicke_classical, diamond };

std::string to_string(Preset p);
std::optional<Preset> parse_preset(const std::string& name);

struct ConfigEntry {
    std::string value;
    int line{0};  // 0: default value
};

// Sectioned key = value configuration ([model], [task], [output]). Keys not
// valid for the selected preset are rejected with the offending line.
class RunConfig {
public:
    static RunConfig from_text(const std::string& text, const std::string& source,
                               std::optional<Preset> preset_override = std::nullopt);
    static RunConfig from_file(const std::string& path, std::optional<Preset> preset_override = std::nullopt);
    static RunConfig from_preset(Preset preset);

    Preset preset() const noexcept { return preset_; }
    const std::string& source() const noexcept { return source_; }

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    // "<source>:<line>: " for a key read from the file, "<source>: " otherwise.
    std::string where(const std::string& section, const std::string& key) const;

    Json to_json() const;
    std::string to_ini() const;

private:
    Preset preset_{Preset::dicke_rwa};
    std::string source_{"<preset>"};
    std::map<std::string, std::map<std::string, ConfigEntry>> values_;

    void fill_defaults();
    void validate() const;
};

// Numbers rounded to 12 significant digits, the precision of every report.
double round12(double x);
std::string format12(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& row);
    void add_row(const std::vector<std::string>& row);
    std::string str() const;
    std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

Json number(double x);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& doc);

struct CommandResult {
    int exit_code{kOk};
    std::vector<std::string> files;
};

CommandResult cmd_resonances(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
CommandResult cmd_effective(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
CommandResult cmd_scan(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
CommandResult cmd_evolve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

// Entry point of the qres executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qres::cli
