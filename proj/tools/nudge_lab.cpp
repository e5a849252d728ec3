#include <iostream>

#include <CLI11.hpp>

#include "nudgelab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nudge-lab: nudging data assimilation experiments"};
    app.require_subcommand(1);
    nudge::CommandOptions opt;
    double mu = 0.0;
    std::string out;
    for (const char* name : {"simulate", "assimilate", "check-condition", "analyze", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "experiment config (key = value)");
        sub->add_option("--override-mu", mu, "nudging parameter, bypassing the automatic choice");
        sub->add_option("--out", out, "output directory");
        sub->add_option("inputs", opt.inputs, "CSV files (analyze) or an observation stream");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nudge::kExitConfig;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--override-mu")) opt.override_mu = mu;
    if (sub->count("--out")) opt.out_dir = out;
    return nudge::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
