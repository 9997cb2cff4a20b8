#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rwvd::cli {

struct CommandSpec;

enum class OptionType { Unsigned, Real, Text, Flag };

struct OptionSpec {
    std::string key;
    OptionType type = OptionType::Text;
    std::string help;
    std::optional<std::string> default_value;
    std::vector<std::string> choices;  // empty: any value
    bool required = false;
    bool echo = true;  // part of the config echo (paths and timing are not)
};

// Validated option values of one command; absent keys fall back to defaults.
class Params {
public:
    Params(const CommandSpec& spec, std::map<std::string, std::string> values);

    bool has(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::optional<std::string> maybe(const std::string& key) const;
    std::uint64_t u64(const std::string& key) const;
    double real(const std::string& key) const;
    bool flag(const std::string& key) const;
    nlohmann::ordered_json echo() const;

private:
    const OptionSpec& option(const std::string& key) const;
    const CommandSpec* spec_;
    std::map<std::string, std::string> values_;
};

struct SideFile {
    std::string path;
    std::string content;
};

struct CommandResult {
    nlohmann::ordered_json payload;
    std::optional<std::string> csv;  // tabular form, emitted when --format csv
    std::vector<std::string> warnings;
    std::vector<SideFile> side_files;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
    std::string default_format = "json";  // "csv" for tabular commands
    std::function<CommandResult(const Params&)> run;
};

const std::vector<CommandSpec>& command_table();
const CommandSpec* find_command(const std::string& name);

// Validates, runs and renders one command; returns the rendered document.
std::string execute(const CommandSpec& spec, const Params& params, bool timing);

// Writes via a temporary file and rename.
void write_file_atomically(const std::string& path, const std::string& content);

// Runs every section of a sweep file; returns the exit code.
int run_sweep(const std::string& config_path, const std::string& out_dir, std::ostream& out,
              std::ostream& err);

}  // namespace rwvd::cli
