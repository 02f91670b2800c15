#ifndef JDR_RELATIONS_HPP
#define JDR_RELATIONS_HPP

#include "jdr/reduce.hpp"

#include <map>
#include <string>
#include <vector>

namespace jdr {

// One automorphism (or holonomy move) acting on the essential generators.
struct AutSpec {
    enum class Kind { AutT, HolBar, AutLambda, AutChi, Mu, Nu, Rho };

    Kind kind = Kind::AutT;
    int copy = 1;      // AutT / Mu / Nu / Rho; Nu with copy 0 acts on every copy
    int tripod = 0;    // HolBar side (0 or 1)
    int direction = 1; // AutT: multiply by t (+1) or t^-1 (-1)
    // lambda_{a,b,c,d}; ParamPoly so the symbolic run and rational
    // specializations share one code path.
    ParamPoly la, lb, lc, ld;
    // chi_P with P = chi_a*t + chi_b, chi_a^2 + chi_b^2 - chi_a*chi_b = 1.
    Rational chi_a, chi_b;
    Rational mu_x = 2;
    Rational rho_y = 1;

    static AutSpec aut_t(int copy, int direction = 1);
    static AutSpec holbar(int tripod);
    static AutSpec lambda(const ParamPoly& a, const ParamPoly& b, const ParamPoly& c, const ParamPoly& d);
    static AutSpec lambda_symbolic();
    static AutSpec chi(const Rational& a, const Rational& b);
    static AutSpec mu(const Rational& x, int copy);
    static AutSpec nu(int copy); // copy 0: simultaneously on all copies
    static AutSpec rho(const Rational& y, int copy);

    std::string to_string() const;
};

// The statement `generator = rhs`, stored as the vector generator - rhs.
struct Relation {
    std::string generator;
    std::string provenance;
    LinCombo vec;

    bool trivial() const { return vec.is_zero(); }
};

// Builds the formal image of an essential generator under the automorphism
// (with the generator's prescribed linkings) and omega-reduces it.
Relation apply_aut(const std::string& generator, const AutSpec& aut, const ReduceContext& ctx);

// The lambda_{a,b,c,d} relation of an appendix run: alpha = 1, symbolic
// parameters in the constraint quotient, quotient mode, and the 4-leg
// relations H1 = -2 H2, H4 = -H2 - H3 folded into the output.
Relation lambda_relation(const std::string& gamma, const ReduceContext& ctx);

// Substitution of the two 4-leg relations at alpha = 1 (modulo lower order):
// H1 -> -2 H2 and H4 -> -H2 - H3, as in the appendix reduction step.
LinCombo fold_h_relations(const LinCombo& v, const ReduceContext& ctx);

// Exact Gaussian reduction of `rel` against `known` over the fraction field
// of the coefficient ring; the remainder is zero exactly when rel lies in
// the span.
LinCombo reduce_against(const LinCombo& rel, const std::vector<LinCombo>& known, const CoeffCtx& ctx);

// Eliminates the listed generators from the relation system by exact row
// reduction and returns the relations remaining on the complement,
// normalized (denominators cleared, integer-primitive coefficients, sign
// fixed by the first coordinate in key order).
std::vector<LinCombo> eliminate_generators(const std::vector<LinCombo>& relations,
                                           const std::vector<GenKey>& eliminate, const CoeffCtx& ctx);

LinCombo normalize_relation(const LinCombo& rel);

// Exact rank of the relation system after substituting the given parameter
// values (indexed by Param). Throws ConstraintViolated when a sample
// violates the active constraints (alpha = -2 or r = 0).
int rank_at_specialization(const std::vector<LinCombo>& relations,
                           const std::array<Rational, kParamCount>& sample);

// The six-relation system of the oplus-3 symbolic run (Aut_t and HolBar over
// the D/G essential set), deduplicated and normalized.
std::vector<Relation> cyclic3_relations(const ReduceContext& ctx);

// The two 4-leg relations (Aut_t over H1..H4, full mode: the right-hand
// sides are two-leg ladder tokens).
std::vector<Relation> lemma45_relations(const ReduceContext& ctx);

// Non-cyclic relation set: nu per copy and on all copies, HolBar, rho and mu
// samples over {Y1, Y2, X1, X2}.
std::vector<Relation> noncyclic_relations(const ReduceContext& ctx);

// Deterministic rational points on a^2+b^2+c^2+d^2 = 1+ab+cd, found by
// sampling a, b, c and solving the quadratic in d when its discriminant is a
// rational square.
std::vector<std::array<Rational, 4>> lambda_constraint_samples(std::size_t count, std::uint64_t seed);

// Rational points on a^2 + b^2 - a*b = 1 (the chi_P constraint at alpha=1).
std::vector<std::pair<Rational, Rational>> chi_constraint_samples(std::size_t count);

} // namespace jdr

#endif
