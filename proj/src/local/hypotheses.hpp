#pragma once

#include "local/isotropy.hpp"
#include "local/pencil.hpp"

namespace oppairs {

// Per-place record for the three hypotheses:
//   (1) Q_s nondegenerate
//   (2) Q_s restricted to ker L_s nondegenerate and isotropic
//   (3) no simultaneous rational specialization of the pencils (global)
struct PlaceHypotheses {
    PlaceId place;
    bool q_nondegenerate = false;
    bool restriction_nondegenerate = false;
    IsotropyVerdict restriction_isotropy;  // meaningful when the restriction is nondegenerate
};

struct HypothesisReport {
    std::vector<PlaceHypotheses> places;
    PencilReport pencil;
    bool cond1 = false;
    bool cond2 = false;
    bool cond3 = false;
    bool pass() const { return cond1 && cond2 && cond3; }
};

HypothesisReport check_hypotheses(const PairInstance& inst);

}  // namespace oppairs
