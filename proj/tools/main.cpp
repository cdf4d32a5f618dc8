#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string cell = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                              : comma - pos);
        values.push_back(std::stod(cell));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.size() != expected)
        throw CLI::ValidationError(flag, "expected " + std::to_string(expected) + " comma-separated numbers");
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace chemostab::cli;

    CLI::App app{"Stability-region and simulation toolkit for a two-species "
                 "chemotaxis-competition system"};
    app.require_subcommand(1);

    Options opt;
    std::string rect = "0,10,0,10";
    std::string window = "0.25,0.9";
    std::string out_dir;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"check", "Region membership, (q, delta) witness and hypothesis verdicts"},
        {"atlas", "Region-membership CSV over an (s, t) rectangle"},
        {"simulate", "Run the finite-difference solver and write snapshots"},
        {"energy", "Energy functional along a previous simulation"},
        {"rate", "Fit and certify exponential decay of a previous simulation"},
        {"compare-regions", "Witnesses for the strict inclusion over the Bai-Winkler region"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "key=value parameter file")->required();
        sub->add_option("--out", out_dir, "output directory");
        if (name == "atlas") {
            sub->add_option("--rect", rect, "s0,s1,t0,t1");
            sub->add_option("--res", opt.res, "samples per axis");
        }
        if (name == "rate") {
            sub->add_option("--window", window, "fit window as fractions a,b of the total time");
            sub->add_option("--min-rate", opt.min_rate, "decay rate threshold");
        }
        if (name == "energy") sub->add_option("--slack", opt.slack, "discretization allowance");
    }

    try {
        app.parse(argc, argv);
        const auto r = parse_list(rect, 4, "--rect");
        opt.rect = {r[0], r[1], r[2], r[3]};
        const auto w = parse_list(window, 2, "--window");
        opt.window = {w[0], w[1]};
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kUsage;
    }
    if (!out_dir.empty()) opt.out = out_dir;

    return run_command(app.get_subcommands().front()->get_name(), opt, std::cout, std::cerr);
}
