#pragma once

#include "forms/forms.hpp"

#include <string>
#include <vector>

namespace oppairs {

struct FinitePlacePair {
    long long p = 0;
    QuadForm<Rat> q;
    LinForm<Rat> l;
};

// A pair of forms per place: archimedean coefficients live in Q(sqrt d)
// (d = 0 means plain rationals), finite-place coefficients in Q.
struct PairInstance {
    std::string label;
    int n = 0;
    long long d = 0;
    QuadForm<ExtReal> q_arch;
    LinForm<ExtReal> l_arch;
    std::vector<FinitePlacePair> finite;

    std::vector<PlaceId> places() const {
        std::vector<PlaceId> ps{PlaceId::arch()};
        for (const auto& f : finite) ps.push_back(PlaceId::finite(f.p));
        return ps;
    }
};

}  // namespace oppairs
