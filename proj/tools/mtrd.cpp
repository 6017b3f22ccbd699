#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mtrd/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact-solution verification, transformation and simulation for multitime reaction-diffusion equations"};
    mtrd::RunOptions opt;
    app.add_option("command", opt.command, "verify | simulate | transform | profile | catalog-list (overrides the config)")
        ->check(CLI::IsMember(mtrd::known_commands()));
    app.add_option("--config", opt.config_path, "JSON run document");
    app.add_option("--out", opt.out_dir, "output directory for report.json and CSV files")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized test-point sampling")->capture_default_str();
    app.add_flag("--quiet", opt.quiet, "suppress the text summary");
    app.footer(
        "Exit status: 0 pass, 1 verification failed, 2 config error, 3 numeric error,\n"
        "             4 output not writable, 5 usage error.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(mtrd::ExitCode::UsageError);
    }
    return static_cast<int>(mtrd::run(opt, std::cout, std::cerr));
}
