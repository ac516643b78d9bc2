// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstring>

#include "lelab/acceptance.hpp"

int main(int argc, char** argv) {
    lelab::AcceptanceConfig cfg;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0) {
            cfg.fast = true;
        } else {
            std::fprintf(stderr, "usage: %s [--fast]\n", argv[0]);
            return 2;
        }
    }
    const lelab::AcceptanceReport rep = lelab::run_acceptance(cfg, [](const lelab::CriterionResult& r) {
        std::printf("%s\n", lelab::format_result(r).c_str());
        std::fflush(stdout);
    });
    for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
    int passed = 0;
    for (const auto& r : rep.results) passed += r.pass ? 1 : 0;
    std::printf("%d/%zu criteria passed in %.1f s\n", passed, rep.results.size(), rep.seconds);
    return rep.all_pass() ? 0 : 1;
}
