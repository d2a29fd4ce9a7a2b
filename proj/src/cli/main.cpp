#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hopw/cli/run.hpp"
#include "hopw/errors.hpp"

namespace hopw::cli {

int report_error(std::ostream& err)
{
    try {
        throw;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const IndexError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const DegenerateError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const DomainError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

namespace {

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides, const std::string& out_dir)
{
    RunConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        config = parse_config(text.str());
    }
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value, got '" + item + "'");
        apply_setting(config, item.substr(0, eq), item.substr(eq + 1));
    }
    if (!out_dir.empty()) config.out = out_dir;
    config.validate();
    return config;
}

} // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Partial-wave dynamics of oscillator wave packets with spin-orbit coupling", "simulate"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string out;
        std::vector<std::string> overrides;
    };
    std::vector<std::pair<CLI::App*, Common>> figs;
    figs.reserve(6);
    for (int k = 1; k <= 6; ++k) {
        const std::string name = "fig" + std::to_string(k);
        auto* sub = app.add_subcommand(name, "Reproduce figure " + std::to_string(k) + " datasets");
        figs.emplace_back(sub, Common{});
        auto& c = figs.back().second;
        sub->add_option("--config", c.config, "Config file with key=value lines");
        sub->add_option("--out", c.out, "Output directory");
        sub->add_option("overrides", c.overrides, "key=value settings");
    }

    Common ec;
    std::string what;
    std::map<std::string, std::string> flags;
    auto* eval = app.add_subcommand("eval", "Evaluate one quantity");
    eval->add_option("what", what, "packet, partialwave, coeffs, density, spin or norm")->required();
    eval->add_option("--config", ec.config, "Config file with key=value lines");
    eval->add_option("--out", ec.out, "Output directory");
    const std::pair<const char*, const char*> eval_flags[] = {
        {"l", "Angular momentum (partialwave)"},
        {"m", "Magnetic number (partialwave, default 0)"},
        {"t", "Time, e.g. 0.5, 1/4T or 1/2Tls"},
        {"grid", "kind[:axis[:offset|auto]], e.g. plane:y:0 or cut:z:auto"},
        {"axis", "Spin projection axis x,y,z (spin)"},
    };
    for (const auto& [name, help] : eval_flags) {
        eval->add_option_function<std::string>(
            std::string("--") + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
    }
    eval->add_option("overrides", ec.overrides, "key=value settings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        for (auto& [sub, c] : figs) {
            if (sub->parsed()) {
                run_figure(sub->get_name(), load_config(c.config, c.overrides, c.out));
                return exit_ok;
            }
        }
        run_eval(what, load_config(ec.config, ec.overrides, ec.out), flags, out);
        return exit_ok;
    } catch (...) {
        return report_error(err);
    }
}

} // namespace hopw::cli
