#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "refdist_cmd.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Tracy-Widom GUE/GOE distribution functions"};
    int rc = 0;
    auto o = std::make_shared<lab_cli::RefdistOpts>();
    lab_cli::add_refdist(app, o, rc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
