#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "command_table.hpp"
#include "rwvd/cli.hpp"
#include "rwvd/errors.hpp"

namespace rwvd::cli {

void write_file_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp";
    std::error_code ec;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path(), ec);
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot write \"" + tmp.string() + "\"");
        os << content;
        if (!os.flush()) throw Error("write failed for \"" + tmp.string() + "\"");
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error("cannot move output into place at \"" + path + "\": " + ec.message());
}

namespace {

struct Entry {
    std::string name;
    const CommandSpec* spec = nullptr;
    Params params;
    std::string output;
};

}  // namespace

int run_sweep(const std::string& config_path, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
    std::vector<Entry> entries;
    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("--config: cannot open \"" + config_path + "\"");
        std::ostringstream text;
        text << in.rdbuf();
        const auto sections = parse_config(text.str());
        if (sections.empty()) throw ConfigError("--config: no [sections] in \"" + config_path + "\"");
        // everything is validated before the first entry runs
        for (const auto& sec : sections) {
            std::map<std::string, std::string> values;
            std::string command;
            for (const auto& [k, v] : sec.entries) {
                if (k == "command")
                    command = v;
                else
                    values[k] = v;
            }
            const auto where = "[" + sec.name + "] ";
            if (command.empty()) throw ConfigError(where + "missing key \"command\"");
            const auto* spec = find_command(command);
            if (!spec) throw ConfigError(where + "unknown command \"" + command + "\"");
            try {
                Params params(*spec, values);
                const auto ext = params.text("format") == "csv" ? ".csv" : ".json";
                auto path = params.maybe("output").value_or(sec.name + ext);
                if (std::filesystem::path(path).is_relative())
                    path = (std::filesystem::path(out_dir) / path).string();
                entries.push_back({sec.name, spec, std::move(params), path});
            } catch (const ConfigError& e) {
                throw ConfigError(where + e.what());
            }
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    int code = 0;
    for (const auto& e : entries) {
        std::string status = "ok";
        try {
            write_file_atomically(e.output, execute(*e.spec, e.params, e.params.flag("timing")));
        } catch (const ConfigError& ex) {
            err << "[" << e.name << "] config error: " << ex.what() << '\n';
            status = "config error";
            code = std::max(code, 2);
        } catch (const std::exception& ex) {
            err << "[" << e.name << "] error: " << ex.what() << '\n';
            status = "error";
            code = std::max(code, 1);
        }
        out << e.name << ',' << e.spec->name << ',' << e.output << ',' << status << '\n';
    }
    return code;
}

}  // namespace rwvd::cli
