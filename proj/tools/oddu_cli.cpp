// Command-line front end. Subcommands are wired up as the corresponding
// campaign modules land; `oddu --help` lists what is available.

#include "oddu/ring.hpp"

#include <CLI11.hpp>

#include <cstdio>

int main(int argc, char** argv) {
    CLI::App app{"quadratic forms over finite rings: checks and campaigns"};
    app.require_subcommand(0, 1);

    bool version = false;
    app.add_flag("--version", version, "print version and exit");

    CLI11_PARSE(app, argc, argv);

    if (version) {
        std::puts("oddu 0.1.0");
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::puts(app.help().c_str());
        return 0;
    }
    return 0;
}
