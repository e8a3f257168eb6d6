// Acceptance suite: every criterion at full scale, one pass/fail line per
// criterion, nonzero exit on any failure. The same criteria run at reduced
// sizes behind `twderham selftest`.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "twderham/selftest.hpp"

int main(int argc, char** argv) {
    twd::AcceptanceConfig cfg;
    cfg.full_scale = true;
    if (const char* env = std::getenv("TWDERHAM_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) cfg.only = argv[++i];
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            cfg.seed = std::strtoull(argv[++i], nullptr, 10);
        if (std::strcmp(argv[i], "--small") == 0) cfg.full_scale = false;
    }

    twd::AcceptanceReport report = twd::run_acceptance(cfg, &std::cout);
    if (report.results.empty()) {
        std::cerr << "no criteria matched the filter\n";
        return 1;
    }
    return report.all_passed() ? 0 : 1;
}
