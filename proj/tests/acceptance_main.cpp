#include <cstdio>

#include "harvestlab/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const auto results = harvestlab::acceptance::run_criteria(filter);
    bool all = true;
    for (const auto& r : results) {
        std::fputs(harvestlab::acceptance::format_result(r).c_str(), stdout);
        all = all && r.pass;
    }
    std::puts(all ? "acceptance: PASS" : "acceptance: FAIL");
    return all ? 0 : 1;
}
