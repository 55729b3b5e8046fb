// SPDX-License-Identifier: Apache-2.0
//
// abslsq run <config>       solver x problem grid, tables and scoreboards
// abslsq verify <config>    invariant checks
// abslsq generate ...       write one instance file

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abslsq/suite.hpp"
#include "abslsq/testgen.hpp"

int main(int argc, char** argv)
{
    using namespace abslsq;

    CLI::App app{"ABS least-squares solvers and benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::size_t> workers;
    std::optional<std::string> out_dir;
    std::uint64_t seed_offset = 0;

    auto add_suite_flags = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "suite config file")->required();
        sub->add_option("--workers", workers, "problems solved in parallel")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed-offset", seed_offset, "added to every generated seed");
    };
    CLI::App* run = app.add_subcommand("run", "run a suite");
    add_suite_flags(run);
    CLI::App* ver = app.add_subcommand("verify", "check invariants on a suite");
    add_suite_flags(ver);

    CLI::App* gen = app.add_subcommand("generate", "write a generated instance");
    std::string family_name;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::vector<std::size_t> pert;
    std::string output;
    gen->add_option("--family", family_name, "IR500 IR500R IR500C RR100 IDF1 IDF2 IDF3 IR50")->required();
    gen->add_option("-m", m, "rows")->required();
    gen->add_option("-n", n, "columns")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--perturbation", pert, "i1 i2 i3 i4")->expected(4);
    gen->add_option("-o,--output", output, "instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto family = parse_family(family_name);
            if (!family) {
                std::cerr << "error: unknown family '" << family_name << "'\n";
                return 2;
            }
            ProblemSpec spec{.family = *family, .m = m, .n = n, .seed = seed};
            if (!pert.empty()) {
                spec.perturbation = Perturbation{pert[0], pert[1], pert[2], static_cast<int>(pert[3])};
            }
            const ProblemInstance inst = generate_problem(spec);
            save_instance(output, inst);
            if (inst.zero_column_warning) {
                std::cerr << "warning: the instance has an all-zero column\n";
            }
            return 0;
        }

        const SuiteConfig config = load_config(config_path);
        RunOptions options;
        options.workers = workers;
        if (out_dir) {
            options.output_dir = *out_dir;
        }
        options.seed_offset = seed_offset;
        return *run ? run_suite(config, options, std::cout, std::cerr)
                    : verify(config, options, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
