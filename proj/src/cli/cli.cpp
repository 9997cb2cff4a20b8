#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "command_table.hpp"
#include "rwvd/cli.hpp"
#include "rwvd/errors.hpp"

namespace rwvd::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random walks in varying dimensions: criteria, exact oracles and simulation", "rwvd"};
    app.set_version_flag("--version", std::string("rwvd ") + RWVD_VERSION);
    app.require_subcommand(1);

    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::map<std::string, bool>> flags;
    for (const auto& spec : command_table()) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        for (const auto& o : spec.options) {
            std::string help = o.help;
            if (o.default_value) help += " [default: " + *o.default_value + "]";
            if (o.type == OptionType::Flag)
                sub->add_flag("--" + o.key, flags[spec.name][o.key], help);
            else
                sub->add_option("--" + o.key, raw[spec.name][o.key], help);
        }
    }
    std::string sweep_config, sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "run every section of a key-value config file");
    sweep->add_option("--config", sweep_config, "config path")->required();
    sweep->add_option("--out-dir", sweep_out, "directory for relative output paths [default: .]");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForVersion&) {
        out << "rwvd " << RWVD_VERSION << '\n';
        return 0;
    } catch (const CLI::Success&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    if (sweep->parsed()) return run_sweep(sweep_config, sweep_out, out, err);

    const auto* sub = app.get_subcommands().front();
    const auto* spec = find_command(sub->get_name());
    try {
        std::map<std::string, std::string> values;
        for (const auto& o : spec->options) {
            if (sub->count("--" + o.key) == 0) continue;
            values[o.key] = o.type == OptionType::Flag ? (flags[spec->name][o.key] ? "true" : "false")
                                                       : raw[spec->name][o.key];
        }
        Params params(*spec, values);
        const auto doc = execute(*spec, params, params.flag("timing"));
        if (const auto path = params.maybe("output"))
            write_file_atomically(*path, doc);
        else
            out << doc;
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace rwvd::cli
