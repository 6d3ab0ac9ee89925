// Acceptance gate: one PASS/FAIL line per criterion. With an argument runs
// only that criterion (ctest registers one entry per criterion).
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <unistd.h>

#include "pinball/errors.hpp"
#include "pinball/verify.hpp"

int main(int argc, char** argv) {
    namespace fs = std::filesystem;
    const fs::path scratch = fs::temp_directory_path() / ("pinball-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(scratch);

    int first = 1;
    int last = pinball::verify::kCriterionCount;
    if (argc > 1) first = last = std::atoi(argv[1]);

    int failures = 0;
    for (int id = first; id <= last; ++id) {
        pinball::verify::CheckResult r;
        try {
            r = pinball::verify::run_criterion(id, scratch.string());
        } catch (const std::exception& e) {
            r = {std::to_string(id), "criterion " + std::to_string(id), false, std::string("threw: ") + e.what()};
        }
        std::cout << pinball::verify::format_line(r) << std::endl;
        failures += r.passed ? 0 : 1;
    }
    fs::remove_all(scratch);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
