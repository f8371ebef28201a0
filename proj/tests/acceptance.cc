#include "experiments.hh"

#include <iostream>

using namespace pcsp;

int main()
{
    experiments::Options opts;
    bool all = true;
    for (unsigned c = 1 ; c <= 13 ; ++c)
        for (auto & e : experiments::registry()) {
            if (e.criterion != c)
                continue;
            auto o = experiments::run(e, opts);
            std::cout << "criterion " << c << " (" << e.name << "): " << (o.pass ? "PASS" : "FAIL") << ": " << o.summary
                      << " [" << o.seconds << "s]" << std::endl;
            all = all && o.pass;
        }
    return all ? 0 : 1;
}
