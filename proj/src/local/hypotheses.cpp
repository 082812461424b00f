#include "local/hypotheses.hpp"

#include <stdexcept>

namespace oppairs {

namespace {

PlaceHypotheses check_arch(const QuadForm<ExtReal>& q, const LinForm<ExtReal>& l) {
    PlaceHypotheses ph;
    ph.place = PlaceId::arch();
    ph.q_nondegenerate = is_nondegenerate(q);
    std::vector<Vec<ExtReal>> kb = kernel_basis(l);
    QuadForm<ExtReal> r = restrict_quad(q, kb);
    ph.restriction_nondegenerate = is_nondegenerate(r);
    if (ph.restriction_nondegenerate) {
        ph.restriction_isotropy = is_isotropic_arch(r);
    } else {
        ph.restriction_isotropy.criterion = "restriction degenerate";
    }
    return ph;
}

PlaceHypotheses check_finite(const FinitePlacePair& fp) {
    PlaceHypotheses ph;
    ph.place = PlaceId::finite(fp.p);
    ph.q_nondegenerate = is_nondegenerate(fp.q);
    std::vector<Vec<Rat>> kb = kernel_basis(fp.l);
    QuadForm<Rat> r = restrict_quad(fp.q, kb);
    ph.restriction_nondegenerate = is_nondegenerate(r);
    if (ph.restriction_nondegenerate) {
        ph.restriction_isotropy = is_isotropic_finite(r, fp.p);
    } else {
        ph.restriction_isotropy.criterion = "restriction degenerate";
    }
    return ph;
}

}  // namespace

HypothesisReport check_hypotheses(const PairInstance& inst) {
    if (inst.l_arch.is_zero()) throw std::invalid_argument("check_hypotheses: zero linear form at the real place");
    for (const FinitePlacePair& fp : inst.finite)
        if (fp.l.is_zero()) throw std::invalid_argument("check_hypotheses: zero linear form at a finite place");

    HypothesisReport rep;
    rep.places.push_back(check_arch(inst.q_arch, inst.l_arch));
    for (const FinitePlacePair& fp : inst.finite) rep.places.push_back(check_finite(fp));

    rep.cond1 = true;
    rep.cond2 = true;
    for (const PlaceHypotheses& ph : rep.places) {
        rep.cond1 = rep.cond1 && ph.q_nondegenerate;
        rep.cond2 = rep.cond2 && ph.restriction_nondegenerate && ph.restriction_isotropy.isotropic;
    }
    rep.pencil = pencil_rationality(inst);
    rep.cond3 = rep.pencil.irrational;
    return rep;
}

}  // namespace oppairs
