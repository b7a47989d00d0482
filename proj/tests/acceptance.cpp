// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>

#include <zlab/zlab.hpp>

int main()
{
    const auto results = zlab::run_acceptance({}, zlab::Budget{}, std::cout);
    int failed = 0;
    for (const auto& r : results)
        failed += !r.pass;
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
