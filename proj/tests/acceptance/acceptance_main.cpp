// Runs the eleven acceptance criteria; exit status is the number of failures.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "ubmot/validate.hpp"

int main(int argc, char** argv) {
    ubmot::ValidateOptions opt;
    bool verbose = false;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-v") verbose = true;
        else if (a == "--small") opt.small_budget = true;
        else only.push_back(std::atoi(argv[i]));
    }
    if (const char* th = std::getenv("UBMOT_THREADS")) opt.threads = std::max(1, std::atoi(th));
    if (only.empty())
        for (int i = 1; i <= ubmot::kCriteria; ++i) only.push_back(i);
    int failed = 0;
    for (int id : only) {
        auto r = ubmot::run_criterion(id, opt);
        std::printf("%s\n", r.summary().c_str());
        for (const auto& c : r.checks)
            if (verbose || !c.pass)
                std::printf("      %s %s: %.6g (tol %.3g) %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.measured,
                            c.tolerance, c.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass();
    }
    std::printf("%d/%zu criteria passed\n", int(only.size()) - failed, only.size());
    return failed;
}
