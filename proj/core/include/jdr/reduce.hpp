#ifndef JDR_REDUCE_HPP
#define JDR_REDUCE_HPP

#include "jdr/diagram.hpp"

#include <array>
#include <string>
#include <vector>

namespace jdr {

// Quotient mode works modulo diagrams with at most two legs (and drops the
// lollipop shapes, which reduce to such); full mode keeps them as opaque
// tagged generators.
enum class Mode { Quotient, Full };

// Negative-control hooks. Each one deliberately miswires a single convention
// so the verification suite can demonstrate its own sensitivity.
struct Mutations {
    bool flip_as_sign = false;        // drop the sign of the AS move in reduc4
    bool flip_push_side = false;      // push contraction edge labels to the wrong side
    bool drop_ld_corrections = false; // ignore linking mismatches in omega_reduce
};

struct ReduceContext {
    BlanchfieldSpec spec;
    Mode mode = Mode::Quotient;
    CoeffCtx coeff;
    Mutations mut;
    const EssentialRegistry* registry = nullptr;

    static ReduceContext cyclic2(const AnnihilatorSpec& a, Mode mode = Mode::Quotient,
                                 bool lambda_constraint = false);
    static ReduceContext cyclic3(const AnnihilatorSpec& a, Mode mode = Mode::Full);
    static ReduceContext noncyclic3(Mode mode = Mode::Full);

    LinCombo unit(const std::string& name) const;
};

// reduc4: expresses a 4-leg H generator in the essential basis through a
// fixed step sequence: parity and same-label tests,
// exponent range reduction, the distribution of an all-same-copy generator
// over two copies, the IHX and AS moves, and the final classification by
// S = k1+k2+k3+k4 (with the parities of k1+k3 and k1+k2 separating H1, H3 and
// H4 when S = 2).
LinCombo reduc4(const std::array<Leg, 4>& legs, const ReduceContext& ctx);

// reduc6: same for YY generators over two copies. Ends by classifying into
// +-Gamma1 / +-Gamma2 via k3+k5-k2-k6 and the parity of k1+k4.
LinCombo reduc6(const std::array<Leg, 6>& legs, const ReduceContext& ctx);

// YY reduction over three copies: range reduction, then canonicalization into
// the hard-coded essential set (D1, D2, G1..G4 and their shifted alternate
// forms). Throws UnmatchedTerm when a term falls outside the catalog.
LinCombo reduce_yy3(const std::array<Leg, 6>& legs, const ReduceContext& ctx);

// Shape dispatch for a monomial generator (including tokens).
LinCombo reduce_key(const GenKey& key, const ReduceContext& ctx);
LinCombo reduce_combo(const LinCombo& c, const ReduceContext& ctx);

// One exponent step at the indexed leg:
//   D+ = -alpha D - D- + sum_{v'} D_{vv'},
// recursed to a fully reduced combination. A leg already in {0,1} is left
// alone (the result is the reduction of the input). Throws NonCyclicMode for
// delta = t+1, where labels reduce by t = -1 instead.
LinCombo reduce_exponent(const GenKey& term, int leg_index, const ReduceContext& ctx);

// Pairing of two legs (the D_{vv'} of the zero-vertex lemma and of the
// exponent-step corollary): contracts legs vi, wi of a monomial diagram with
// a polynomial connecting-edge label read vi -> wi, pushes each t-power of
// the label into the legs, and reduces the result. For a YY diagram the
// contraction of legs on distinct tripods yields an H diagram; legs on one
// tripod yield a lollipop (zero when the edge label is constant). For an H
// diagram it yields the two-leg ladder or loop-stem generators.
LinCombo pair_legs(GenKey::Kind kind, const std::vector<Leg>& legs, int vi, int wi,
                   const LaurentPoly& edge, const ReduceContext& ctx);

// Full distributive expansion of formal-combination legs (the LV relation),
// each term canonicalized.
LinCombo expand_multilinear(GenKey::Kind kind, const std::vector<FormalLeg>& legs,
                            const ReduceContext& ctx);

// As above, but every term is pushed through the active reducer.
LinCombo expand_and_reduce(GenKey::Kind kind, const std::vector<FormalLeg>& legs,
                           const ReduceContext& ctx);

// Canonical omega-reduction of a general diagram with explicit linkings:
// expands the labels, restores the convention linkings via LD corrections
// (computed with split_fraction and contracted with pair_legs), eliminates
// zero-labelled legs, and reduces every term.
LinCombo omega_reduce(const GeneralDiagram& d, const ReduceContext& ctx);

// Zero-labelled leg elimination: the diagram equals the sum of its pairings
// of `vi` with every other leg, the connecting edge carrying the (polynomial)
// linking.
LinCombo eliminate_zero_leg(const GeneralDiagram& d, int vi, const ReduceContext& ctx);

// Lollipop elimination: rewrites the loop component through the 0-labelled
// form (coefficient 1/delta(1)) and pairs the zero leg with the far tripod.
// Requires a numeric annihilator (delta(1) must be invertible).
LinCombo eliminate_lollipop(const GenKey& lollipop, const ReduceContext& ctx);

// iota-expansion: a 4-leg generator with all legs in one copy equals half the
// sum of the distributions of its legs over two copies; with the Aut_xi
// identification this is the three-term sum, which is then reduced.
LinCombo iota_expand(const std::array<Leg, 4>& legs, const ReduceContext& ctx);

// All pairings (fixed-point-free involutions) of the legs of a diagram; the
// psi_2 map sends the diagram to the sum of the corresponding full
// contractions, so an odd number of legs yields the empty list.
std::vector<std::vector<std::pair<int, int>>> psi2_pairings(int leg_count);
std::vector<std::vector<std::pair<int, int>>> psi2_expand(const GenKey& key);

} // namespace jdr

#endif
