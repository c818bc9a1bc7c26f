// Command-line front end: basket_cli <command> [--config FILE] [--<key> VALUE ...]
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "basket/cli.hpp"
#include "basket/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"High-order compact finite differences for a two-asset basket put"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "key=value configuration file");
    std::vector<std::string> sets;
    app.add_option("--set", sets, "override as key=value (repeatable)");
    std::map<std::string, std::string> flags;
    for (auto key : basket::config_keys()) {
        const std::string name(key);
        app.add_option_function<std::string>(
               "--" + name, [&flags, name](const std::string& v) { flags[name] = v; },
               "overrides config key " + name)
            ->group("Config keys");
    }

    auto* price = app.add_subcommand("price", "solve and print the price at (s1, s2)");
    auto* converge = app.add_subcommand("converge", "convergence study, writes CSV and SVG");
    auto* smooth = app.add_subcommand("smooth-check", "raw and smoothed initial data as CSV");
    auto* oracle = app.add_subcommand("oracle", "quadrature and Monte Carlo reference prices");
    auto* stencil = app.add_subcommand("stencil", "stencil utilities");
    auto* dump = stencil->add_subcommand("dump", "print the stencil coefficients");
    stencil->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << app.help();
        return 2;
    }

    std::string command;
    for (auto* sub : {price, converge, smooth, oracle}) {
        if (sub->parsed()) command = sub->get_name();
    }
    if (dump->parsed()) command = "stencil dump";

    basket::RunConfig cfg;
    try {
        basket::ConfigEntries overrides(flags.begin(), flags.end());
        for (const auto& s : sets) {
            auto kv = basket::parse_key_values(s);
            overrides.insert(overrides.end(), kv.begin(), kv.end());
        }
        cfg = basket::parse_config(basket::read_config_file(config_file), overrides);
    } catch (const basket::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    return basket::dispatch(command, cfg, std::cout, std::cerr);
}
