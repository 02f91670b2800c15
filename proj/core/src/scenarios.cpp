#include "jdr/scenarios.hpp"

#include "jdr/errors.hpp"
#include "jdr/relations.hpp"
#include "jdr/textio.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace jdr {

namespace {

struct Outcome {
    bool ok = false;
    std::string computed;
    std::string expected;
};

struct Scenario {
    std::string id;
    std::string description;
    std::function<Outcome(const VerifyOptions&)> run;
};

// --- helpers -------------------------------------------------------------------

ReduceContext with_mut(ReduceContext ctx, const VerifyOptions& opt) {
    ctx.mut = opt.mut;
    return ctx;
}

ReduceContext sym2(const VerifyOptions& opt, Mode mode = Mode::Quotient) {
    return with_mut(ReduceContext::cyclic2(AnnihilatorSpec::cyclic_symbolic(), mode), opt);
}

ReduceContext sym3(const VerifyOptions& opt) {
    return with_mut(ReduceContext::cyclic3(AnnihilatorSpec::cyclic_symbolic(), Mode::Full), opt);
}

ReduceContext at3(const Rational& alpha, const VerifyOptions& opt) {
    return with_mut(ReduceContext::cyclic3(AnnihilatorSpec::cyclic(alpha), Mode::Full), opt);
}

ReduceContext lambda_ctx(const VerifyOptions& opt) {
    return with_mut(ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Quotient, true), opt);
}

ReduceContext noncyc(const VerifyOptions& opt) {
    return with_mut(ReduceContext::noncyclic3(Mode::Full), opt);
}

LinCombo parse_vec(const std::string& text, const ReduceContext& ctx) {
    LinCombo raw = parse_lincombo(text, ctx.registry);
    LinCombo out;
    for (const auto& [k, c] : raw.terms()) out.add(k, c, ctx.coeff);
    return out;
}

Outcome expect_eq(const LinCombo& computed, const LinCombo& expected, const ReduceContext& ctx) {
    Outcome o;
    o.ok = computed == expected;
    o.computed = computed.to_string(ctx.registry);
    o.expected = expected.to_string(ctx.registry);
    return o;
}

Outcome expect_true(bool ok, const std::string& computed, const std::string& expected) {
    return Outcome{ok, computed, expected};
}

const std::vector<std::string>& lemma42_expected_text() {
    static const std::vector<std::string> texts = {
        "D1 - D2",
        "(alpha+2)*D1 - r*H3 + r*H4",
        "alpha*G1 + 2*G2 - r*H1",
        "G1 + alpha*G2 + G4 - r*H3",
        "alpha*G3 + 2*G4 - r*H4",
        "(alpha+1)*G2 + G3 - r*H2",
    };
    return texts;
}

std::vector<LinCombo> lemma42_expected(const ReduceContext& ctx) {
    std::vector<LinCombo> out;
    for (const auto& t : lemma42_expected_text()) out.push_back(parse_vec(t, ctx));
    return out;
}

std::vector<LinCombo> relation_vectors(const std::vector<Relation>& rels) {
    std::vector<LinCombo> out;
    for (const auto& r : rels) out.push_back(r.vec);
    return out;
}

int field_rank(const std::vector<LinCombo>& rels, const CoeffCtx& ctx) {
    return static_cast<int>(eliminate_generators(rels, {}, ctx).size());
}

const std::string kR6Text =
    "(1-alpha)*(alpha+2)^2*G1 - 4*r*H3 - 2*alpha*r*H2 + 2*r*H4 + alpha*(alpha+3)*r*H1";

LinCombo r6_relation(const ReduceContext& ctx) { return normalize_relation(parse_vec(kR6Text, ctx)); }

const std::string kKText = "Gamma1 + 2*Gamma2 - 3*r*H3";

LinCombo substituted(const LinCombo& v, Param p, const Rational& value) {
    LinCombo out;
    CoeffCtx plain;
    for (const auto& [k, c] : v.terms()) out.add(k, c.substitute(p, value), plain);
    return out;
}

std::vector<Rational> random_alphas(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> out;
    while (out.size() < n) {
        Rational a(num(rng), den(rng));
        if (a == 1 || a == -2) continue;
        if (std::find(out.begin(), out.end(), a) != out.end()) continue;
        out.push_back(a);
    }
    return out;
}

// --- scenario bodies --------------------------------------------------------------

Outcome ring_a2_normal_form(const VerifyOptions&) {
    ParamPoly a2 = ParamPoly::variable(Param::A, 2);
    ParamPoly got = param_normalize(a2, true);
    ParamPoly want = parse_param_poly("1 + a*b + c*d - b^2 - c^2 - d^2");
    return expect_true(got == want && param_normalize(ParamPoly(), true).is_zero(), got.to_string(),
                       want.to_string());
}

Outcome ring_a3b_fixpoint(const VerifyOptions& opt) {
    ParamPoly a3b = ParamPoly::variable(Param::A, 3) * ParamPoly::variable(Param::B);
    ParamPoly got = param_normalize(a3b, true);
    bool ok = got.max_exponent(Param::A) <= 1 && param_normalize(got, true) == got;
    // cross-check by evaluation at constraint points
    auto pts = lambda_constraint_samples(20, opt.seed);
    for (const auto& [a, b, c, d] : pts) {
        std::array<Rational, kParamCount> vals = {Rational(1), a, b, c, d, Rational(1)};
        if (a3b.eval(vals) != got.eval(vals)) ok = false;
    }
    return expect_true(ok, got.to_string(), "a-degree <= 1 fixpoint, equal at 20 constraint points");
}

Outcome ring_bar_involution(const VerifyOptions&) {
    LaurentPoly q1 = parse_laurent("t + 1");
    LaurentPoly q2 = parse_laurent("3*t^2 - t^-1");
    bool ok = laurent_bar(q1) == parse_laurent("t^-1 + 1") && laurent_bar(q2) == parse_laurent("3*t^-2 - t") &&
              laurent_bar(laurent_bar(q2)) == q2;
    return expect_true(ok, laurent_bar(q1).to_string() + " ; " + laurent_bar(q2).to_string(),
                       "t^-1 + 1 ; 3*t^-2 - t");
}

Outcome ring_mod_delta(const VerifyOptions&) {
    auto sym = AnnihilatorSpec::cyclic_symbolic();
    LaurentPoly got = laurent_mod_delta(LaurentPoly::t_power(2), sym);
    LaurentPoly want = parse_laurent("-alpha*t - 1");
    LaurentPoly got_nc = laurent_mod_delta(LaurentPoly::t_power(3), AnnihilatorSpec::noncyclic());
    bool ok = got == want && got_nc == parse_laurent("-1");
    return expect_true(ok, got.to_string() + " ; " + got_nc.to_string(), want.to_string() + " ; -1");
}

Outcome ring_split_f14(const VerifyOptions&) {
    // (at+b)(at^-2+bt^-1) + (ct+d)(ct^-2+dt^-1) over delta, prescribed t^-1.
    LaurentPoly num = parse_laurent("(a*t + b)*(a*t^-2 + b*t^-1) + (c*t + d)*(c*t^-2 + d*t^-1)");
    LaurentPoly normalized;
    for (const auto& [k, c] : num.terms()) normalized.add_term(k, param_normalize(c, true));
    LaurentPoly got = split_fraction(normalized, LaurentPoly::t_power(-1), AnnihilatorSpec::cyclic(Rational(1)));
    LaurentPoly want = parse_laurent("(a*b + c*d)*t^-1");
    bool ok = got == want;
    // identity case
    ok = ok && split_fraction(want, want, AnnihilatorSpec::cyclic(Rational(1))).is_zero();
    return expect_true(ok, got.to_string(), want.to_string());
}

Outcome ring_split_noncyclic(const VerifyOptions&) {
    LaurentPoly got = split_fraction(parse_laurent("-t"), LaurentPoly(1), AnnihilatorSpec::noncyclic());
    return expect_true(got == parse_laurent("-1"), got.to_string(), "-1");
}

Outcome reduc4_units(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    bool ok = true;
    std::ostringstream got;
    for (const std::string name : {"H1", "H2", "H3", "H4"}) {
        GenKey seed = *ctx.registry->seed_of(name);
        LinCombo red = reduc4({seed.legs[0], seed.legs[1], seed.legs[2], seed.legs[3]}, ctx);
        ok = ok && red == ctx.unit(name);
        got << name << " -> " << red.to_string(ctx.registry) << "; ";
    }
    return expect_true(ok, got.str(), "each H tuple is a unit vector");
}

Outcome reduc4_as_degenerate(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    LinCombo red = reduc4({g(0, 1), g(1, 1), g(0, 2), g(0, 2)}, ctx);
    return expect_true(red.is_zero(), red.to_string(ctx.registry), "0");
}

Outcome reduc4_exponent_step(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt, Mode::Full);
    LinCombo red = reduc4({g(2, 1), g(0, 2), g(0, 1), g(0, 2)}, ctx);
    LinCombo want = parse_vec("-alpha*H2 - H1 - r*ladder[(0,1),(1,1)]", ctx);
    return expect_eq(red, want, ctx);
}

Outcome reduc6_units(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    bool ok = true;
    std::ostringstream got;
    for (const std::string name : {"Gamma1", "Gamma2"}) {
        GenKey seed = *ctx.registry->seed_of(name);
        std::array<Leg, 6> legs;
        std::copy(seed.legs.begin(), seed.legs.end(), legs.begin());
        LinCombo red = reduc6(legs, ctx);
        ok = ok && red == ctx.unit(name);
        got << name << " -> " << red.to_string(ctx.registry) << "; ";
    }
    // Gamma3 = Gamma1 via Aut_t on copy 1.
    GenKey g3 = *ctx.registry->seed_of("Gamma3");
    std::array<Leg, 6> legs;
    std::copy(g3.legs.begin(), g3.legs.end(), legs.begin());
    LinCombo red = reduc6(legs, ctx);
    ok = ok && red == ctx.unit("Gamma1");
    got << "Gamma3 -> " << red.to_string(ctx.registry);
    return expect_true(ok, got.str(), "Gamma1, Gamma2 units; Gamma3 -> Gamma1");
}

Outcome reduc6_as_degenerate(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    LinCombo red = reduc6({g(0, 1), g(0, 1), g(1, 2), g(0, 2), g(1, 2), g(0, 1)}, ctx);
    return expect_true(red.is_zero(), red.to_string(ctx.registry), "0");
}

Outcome lemma42_relations_scenario(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    auto vecs = relation_vectors(cyclic3_relations(ctx));
    auto want = lemma42_expected(ctx);
    // The ambient 4-leg relations are part of the presentation's background;
    // some holonomy applications return a six-relation combined with them.
    std::vector<LinCombo> ambient = want;
    for (const auto& rel : lemma45_relations(ctx)) ambient.push_back(rel.vec);
    bool ok = true;
    for (const auto& w : want) ok = ok && reduce_against(w, vecs, ctx.coeff).is_zero();
    for (const auto& v : vecs) ok = ok && reduce_against(v, ambient, ctx.coeff).is_zero();
    const int rank = field_rank(vecs, ctx.coeff);
    const int ambient_rank = field_rank(ambient, ctx.coeff);
    ok = ok && rank == ambient_rank;
    std::ostringstream got;
    got << vecs.size() << " generated relations of rank " << rank;
    return expect_true(ok, got.str(),
                       "span equals the six relations plus the ambient 4-leg relations (rank " +
                           std::to_string(ambient_rank) + ")");
}

// remaining == scale * r6 for a polynomial scale (row reduction clears
// denominators, so the eliminated relation carries a content factor).
bool matches_up_to_content(const LinCombo& remaining, const LinCombo& r6, const GenKey& lead,
                           LinCombo& quotient, const CoeffCtx& ctx) {
    auto scale = divide_exact(remaining.coeff(lead), r6.coeff(lead));
    if (!scale || scale->is_zero()) return false;
    quotient = LinCombo();
    for (const auto& [k, c] : remaining.terms()) {
        auto q = divide_exact(c, *scale);
        if (!q) return false;
        quotient.add(k, *q, ctx);
    }
    return quotient == r6;
}

Outcome lemma42_r6_elimination(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    auto want6 = lemma42_expected(ctx);
    std::vector<GenKey> elim = {*ctx.registry->seed_of("D1"), *ctx.registry->seed_of("D2"),
                                *ctx.registry->seed_of("G2"), *ctx.registry->seed_of("G3"),
                                *ctx.registry->seed_of("G4")};
    auto remaining = eliminate_generators(want6, elim, ctx.coeff);
    LinCombo r6 = r6_relation(ctx);
    LinCombo quotient;
    bool ok = remaining.size() == 1 &&
              matches_up_to_content(remaining[0], r6, *ctx.registry->seed_of("G1"), quotient, ctx.coeff);
    std::string got = ok ? quotient.to_string(ctx.registry)
                         : (remaining.empty() ? "none" : remaining[0].to_string(ctx.registry));
    return expect_true(ok, got, r6.to_string(ctx.registry));
}

Outcome lemma42_r6_reduces(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    LinCombo rem = reduce_against(r6_relation(ctx), lemma42_expected(ctx), ctx.coeff);
    return expect_true(rem.is_zero(), rem.to_string(ctx.registry), "0");
}

Outcome lemma45_scenario(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    auto rels = lemma45_relations(ctx);
    LinCombo wa = normalize_relation(parse_vec("alpha*H1 + 2*H2 + r*ladder[(0,1),(0,1)]", ctx));
    LinCombo wb = normalize_relation(parse_vec("alpha*H2 + H3 + H4 + r*ladder[(0,1),(1,1)]", ctx));
    bool ok = rels.size() == 2;
    if (ok) {
        ok = (rels[0].vec == wa && rels[1].vec == wb) || (rels[0].vec == wb && rels[1].vec == wa);
    }
    std::ostringstream got;
    for (const auto& r : rels) got << r.vec.to_string(ctx.registry) << "; ";
    return expect_true(ok, got.str(), wa.to_string(ctx.registry) + "; " + wb.to_string(ctx.registry));
}

Outcome holbar_gamma1(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    Relation rel = apply_aut("Gamma1", AutSpec::holbar(0), ctx);
    LinCombo want = parse_vec("Gamma1 - Gamma2 + r*H2 - r*H3", ctx);
    return expect_eq(rel.vec, want, ctx);
}

Outcome lambda_gamma(const VerifyOptions& opt, const std::string& gamma, const std::string& scalar) {
    ReduceContext ctx = lambda_ctx(opt);
    Relation rel = lambda_relation(gamma, ctx);
    LinCombo want = parse_vec("(" + scalar + ")*(" + kKText + ")", ctx);
    // A relation is only defined up to sign; orient it along the expected
    // scalar for the comparison.
    LinCombo vec = rel.vec;
    if (!(vec == want)) {
        LinCombo neg;
        neg.add_scaled(vec, ParamPoly(-1), ctx.coeff);
        vec = neg;
    }
    return expect_eq(vec, want, ctx);
}

Outcome lambda_reduce_to_k(const VerifyOptions& opt) {
    ReduceContext ctx = lambda_ctx(opt);
    std::vector<LinCombo> known = {parse_vec(kKText, ctx)};
    bool ok = true;
    std::ostringstream got;
    for (const std::string gamma : {"Gamma1", "Gamma2", "Gamma3"}) {
        LinCombo rem = reduce_against(lambda_relation(gamma, ctx).vec, known, ctx.coeff);
        ok = ok && rem.is_zero();
        got << gamma << " -> " << rem.to_string(ctx.registry) << "; ";
    }
    return expect_true(ok, got.str(), "remainder 0 against {Gamma1 + 2*Gamma2 - 3*r*H3}");
}

Outcome aut_chi_reduce(const VerifyOptions& opt) {
    ReduceContext ctx = with_mut(ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Quotient),
                                 opt);
    std::vector<LinCombo> known = {parse_vec(kKText, ctx), parse_vec("Gamma1 - Gamma2 + r*H2 - r*H3", ctx)};
    bool ok = true;
    std::ostringstream got;
    std::vector<LinCombo> folded_known;
    for (const auto& k : known) folded_known.push_back(fold_h_relations(k, ctx));
    for (const auto& [a, b] : chi_constraint_samples(4)) {
        bool here = true;
        for (const std::string gamma : {"Gamma1", "Gamma2"}) {
            Relation rel = apply_aut(gamma, AutSpec::chi(a, b), ctx);
            LinCombo rem = reduce_against(fold_h_relations(rel.vec, ctx), folded_known, ctx.coeff);
            here = here && rem.is_zero();
        }
        ok = ok && here;
        got << "chi(" << rational_to_string(a) << "," << rational_to_string(b) << ") "
            << (here ? "ok; " : "remainder nonzero; ");
    }
    return expect_true(ok, got.str(), "chi relations recovered from the known relations");
}

Outcome kernel_vanishes(const VerifyOptions& opt) {
    ReduceContext ctx = at3(Rational(1), opt);
    auto rels = relation_vectors(cyclic3_relations(ctx));
    LinCombo d = parse_vec("2*H1 + H4 - 2*H3 - H2", ctx);
    LinCombo rem = reduce_against(d, rels, ctx.coeff);
    return expect_true(rem.is_zero(), rem.to_string(ctx.registry), "0");
}

Outcome kernel_image_nonzero(const VerifyOptions& opt) {
    ReduceContext ctx = lambda_ctx(opt); // alpha = 1, quotient-mode cyclic2
    LinCombo d = parse_vec("2*H1 + H4 - 2*H3 - H2", ctx);
    LinCombo img = fold_h_relations(d, ctx);
    LinCombo want = parse_vec("3*H1 - 3*H3", ctx);
    // wrong on purpose if folding disagrees; also demand it is nonzero in the
    // rank-2 quotient on {H1, H3}
    bool ok = img == fold_h_relations(want, ctx) && !img.is_zero();
    return expect_true(ok, img.to_string(ctx.registry), fold_h_relations(want, ctx).to_string(ctx.registry));
}

Outcome kernel_generic(const VerifyOptions& opt) {
    bool ok = true;
    std::ostringstream got;
    for (const Rational& alpha : random_alphas(5, opt.seed)) {
        ReduceContext ctx = at3(alpha, opt);
        auto rels = relation_vectors(cyclic3_relations(ctx));
        LinCombo d = parse_vec("2*H1 + H4 - 2*H3 - H2", ctx);
        LinCombo rem = reduce_against(d, rels, ctx.coeff);
        ok = ok && !rem.is_zero();
        got << "alpha=" << rational_to_string(alpha) << (rem.is_zero() ? " vanishes(!); " : " nonzero; ");
    }
    return expect_true(ok, got.str(), "the kernel vector survives at every alpha outside {1,-2}");
}

Outcome iota_g(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    LinCombo got = iota_expand({g(0, 1), g(1, 1), g(0, 1), g(1, 1)}, ctx);
    LinCombo want = parse_vec("H1 + H3 - 2*H4", ctx);
    return expect_eq(got, want, ctx);
}

Outcome iota_scaled(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt);
    LinCombo got = iota_expand({g(1, 1), g(2, 1), g(1, 1), g(2, 1)}, ctx);
    LinCombo want = iota_expand({g(0, 1), g(1, 1), g(0, 1), g(1, 1)}, ctx);
    return expect_eq(got, want, ctx);
}

Outcome iota_r6_form(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    std::array<Leg, 4> legs = {g(0, 1), g(1, 1), g(0, 1), g(1, 1)};
    LinCombo iota = reduce_combo(
        [&] {
            LinCombo c;
            c.add(h_key(legs), ParamPoly(1), ctx.coeff);
            return c;
        }(),
        ctx);
    LinCombo combo;
    combo.add_scaled(iota, ParamPoly(2) * ParamPoly::variable(Param::R), ctx.coeff);
    combo -= parse_vec("(1-alpha)*(alpha+2)^2*G1 + r*(alpha+1)*(alpha+2)*H1", ctx);
    auto l45 = lemma45_relations(ctx);
    std::vector<LinCombo> known = {r6_relation(ctx)};
    for (const auto& rel : l45) known.push_back(rel.vec.without_lower_order());
    LinCombo rem = reduce_against(combo, known, ctx.coeff);
    return expect_true(rem.is_zero(), rem.to_string(ctx.registry),
                       "0 (2r*iota(G) matches (1-alpha)(alpha+2)^2*G1 + r(alpha+1)(alpha+2)*H1 modulo "
                       "R6 and the 4-leg relations)");
}

Outcome dim_cyclic_generic(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    std::vector<LinCombo> rels;
    for (const auto& rel : lemma45_relations(ctx)) rels.push_back(rel.vec.without_lower_order());
    bool ok = true;
    std::ostringstream got;
    for (const Rational& alpha : random_alphas(5, opt.seed ^ 0x9e3779b9ull)) {
        std::array<Rational, kParamCount> sample = {alpha, Rational(2), Rational(3), Rational(5), Rational(7),
                                                    Rational(1)};
        int rank = rank_at_specialization(rels, sample);
        ok = ok && rank == 2;
        got << "alpha=" << rational_to_string(alpha) << " rank=" << rank << "; ";
    }
    return expect_true(ok, got.str() + "(dimension 2 on {H1,H3})", "rank 2, quotient dimension 2");
}

Outcome dim_cyclic_alpha1(const VerifyOptions& opt) {
    ReduceContext ctx = sym3(opt);
    std::vector<LinCombo> rels;
    for (const auto& rel : lemma45_relations(ctx)) rels.push_back(substituted(rel.vec.without_lower_order(), Param::Alpha, Rational(1)));
    rels.push_back(substituted(r6_relation(ctx), Param::Alpha, Rational(1)));
    std::array<Rational, kParamCount> sample = {Rational(1), Rational(2), Rational(3), Rational(5), Rational(7),
                                                Rational(1)};
    int rank = rank_at_specialization(rels, sample);
    return expect_true(rank == 3, "rank=" + std::to_string(rank) + " over {H1..H4}",
                       "rank 3, quotient dimension 1 on {H1}");
}

Outcome dim_noncyclic(const VerifyOptions& opt) {
    ReduceContext ctx = noncyc(opt);
    std::vector<LinCombo> rels;
    for (const auto& rel : noncyclic_relations(ctx)) {
        LinCombo v = rel.vec.without_lower_order();
        if (!v.is_zero()) rels.push_back(v);
    }
    std::array<Rational, kParamCount> sample = {Rational(0), Rational(1), Rational(1), Rational(1), Rational(1),
                                                Rational(1)};
    int rank = rank_at_specialization(rels, sample);
    LinCombo x1 = parse_vec("X1", ctx);
    bool survives = !reduce_against(x1, rels, ctx.coeff).is_zero();
    return expect_true(rank == 3 && survives,
                       "rank=" + std::to_string(rank) + ", X1 " + (survives ? "nonzero" : "zero"),
                       "rank 3 over {Y1,Y2,X1,X2}, quotient dimension 1 on X1");
}

Outcome noncyclic_2y1(const VerifyOptions& opt) {
    ReduceContext ctx = noncyc(opt);
    Relation rel = apply_aut("Y1", AutSpec::nu(1), ctx);
    LinCombo want = parse_vec("2*Y1 - X1 + X2", ctx);
    return expect_eq(rel.vec, want, ctx);
}

Outcome noncyclic_2y2(const VerifyOptions& opt) {
    ReduceContext ctx = noncyc(opt);
    Relation rel = apply_aut("Y2", AutSpec::holbar(0), ctx);
    LinCombo main = rel.vec.without_lower_order();
    LinCombo want = parse_vec("2*Y2 - 3*X1", ctx);
    bool ok = main == want;
    return expect_true(ok, rel.vec.to_string(ctx.registry),
                       want.to_string(ctx.registry) + " + lower-order terms");
}

Outcome noncyclic_x1px2(const VerifyOptions& opt) {
    ReduceContext ctx = noncyc(opt);
    Relation rel = apply_aut("X1", AutSpec::nu(1), ctx);
    LinCombo want = parse_vec("X1 + X2 + ladder[(g,1),(e,1)]", ctx);
    return expect_eq(rel.vec, want, ctx);
}

Outcome noncyclic_mu_trivial(const VerifyOptions& opt) {
    ReduceContext ctx = noncyc(opt);
    LinCombo red = reduce_key(parse_lincombo("YY[(g,1),(g,2),(e,2);(g,1),(g,3),(e,3)]", ctx.registry)
                                  .terms()
                                  .begin()
                                  ->first,
                              ctx);
    return expect_true(red.is_zero(), red.to_string(ctx.registry), "0");
}

Outcome psi2_counts(const VerifyOptions&) {
    std::ostringstream got;
    bool ok = true;
    const int want[4] = {1, 3, 15, 0};
    int idx = 0;
    for (int legs : {2, 4, 6}) {
        int n = static_cast<int>(psi2_pairings(legs).size());
        ok = ok && n == want[idx++];
        got << legs << " legs -> " << n << "; ";
    }
    ok = ok && psi2_pairings(3).empty();
    got << "3 legs -> 0";
    return expect_true(ok, got.str(), "1, 3, 15 pairings; odd leg count gives none");
}

// A zero-labelled leg only carries polynomial linkings; the natural source
// is a label killed by delta, whose linkings are delta times the prescribed
// ones.
GeneralDiagram with_zero_leg(GeneralDiagram d, int vi, const ReduceContext& ctx) {
    d.legs[vi] = FormalLeg{};
    const LaurentPoly delta = ctx.spec.annihilator.delta();
    for (int j = 0; j < d.leg_count(); ++j) {
        if (j == vi) continue;
        const int i = std::min(vi, j), k = std::max(vi, j);
        d.set_linking(i, k, d.linking_of(i, k) * delta);
    }
    return d;
}

Outcome zero_leg_pairing(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt, Mode::Full);
    // YY whose zero top leg on tripod A has its only same-copy partner on
    // tripod B.
    std::vector<Leg> legs = {g(0, 1), g(0, 2), g(1, 2), g(1, 1), g(0, 2), g(1, 2)};
    GeneralDiagram d = with_zero_leg(admissible_diagram(GenKey::Kind::YY, legs, ctx.spec), 0, ctx);
    LinCombo got = eliminate_zero_leg(d, 0, ctx);
    // the only polynomial linking of the zero leg is with leg 3: delta*f = r*t^{-1}
    LinCombo want = pair_legs(GenKey::Kind::YY, legs, 0, 3,
                              LaurentPoly::monomial(-1, ParamPoly::variable(Param::R)), ctx);
    Outcome o = expect_eq(got, want, ctx);
    // and a zero leg with no same-copy partner vanishes outright
    std::vector<Leg> lone = {g(0, 1), g(0, 2), g(1, 2), g(0, 2), g(1, 2), g(0, 3)};
    GeneralDiagram d2 = with_zero_leg(admissible_diagram(GenKey::Kind::YY, lone, ctx.spec), 0, ctx);
    o.ok = o.ok && eliminate_zero_leg(d2, 0, ctx).is_zero();
    return o;
}

Outcome zero_leg_quotient_h(const VerifyOptions& opt) {
    ReduceContext ctx = sym2(opt, Mode::Quotient);
    std::vector<Leg> legs = {g(0, 1), g(0, 2), g(0, 1), g(1, 2)};
    GeneralDiagram d = with_zero_leg(admissible_diagram(GenKey::Kind::H, legs, ctx.spec), 1, ctx);
    LinCombo got = eliminate_zero_leg(d, 1, ctx);
    return expect_true(got.is_zero(), got.to_string(ctx.registry), "0 (all pairings drop to lower order)");
}

Outcome lollipop_third(const VerifyOptions& opt) {
    ReduceContext ctx = with_mut(ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Full), opt);
    GenKey lol;
    lol.kind = GenKey::Kind::Lollipop;
    lol.loop_exp = 1;
    lol.legs = {g(0, 1), g(0, 1), g(0, 2), g(1, 2)};
    LinCombo got = eliminate_lollipop(lol, ctx);
    // delta(1) = 3: every coefficient carries r/3
    bool ok = !got.is_zero();
    for (const auto& [k, c] : got.terms()) {
        for (const auto& [e, q] : c.terms()) {
            ok = ok && (denominator(q) == 3 || denominator(q) == 1);
        }
    }
    return expect_true(ok, got.to_string(ctx.registry), "loop-stem terms weighted by r/delta(1) = r/3");
}

// --- registry ----------------------------------------------------------------------

const std::vector<Scenario>& registry() {
    static const std::vector<Scenario> scenarios = [] {
        std::vector<Scenario> s;
        auto add = [&s](std::string id, std::string desc, std::function<Outcome(const VerifyOptions&)> fn) {
            s.push_back(Scenario{std::move(id), std::move(desc), std::move(fn)});
        };
        add("appendix-lambda-gamma1", "lambda action on Gamma1 yields (ab+cd)(Gamma1+2Gamma2-3rH3)",
            [](const VerifyOptions& o) { return lambda_gamma(o, "Gamma1", "a*b + c*d"); });
        add("appendix-lambda-gamma2", "lambda action on Gamma2 yields (a^2+c^2)(Gamma1+2Gamma2-3rH3)",
            [](const VerifyOptions& o) { return lambda_gamma(o, "Gamma2", "a^2 + c^2"); });
        add("appendix-lambda-gamma3", "lambda action on Gamma3 yields (b^2+d^2-1)(Gamma1+2Gamma2-3rH3)",
            [](const VerifyOptions& o) { return lambda_gamma(o, "Gamma3", "b^2 + d^2 - 1"); });
        add("appendix-lambda-reduce-to-k", "each lambda relation reduces to zero against K",
            lambda_reduce_to_k);
        add("appendix-ring-a2-normal-form", "a^2 rewrites to 1+ab+cd-b^2-c^2-d^2", ring_a2_normal_form);
        add("appendix-ring-a3b-fixpoint", "constraint normal form is an idempotent fixpoint",
            ring_a3b_fixpoint);
        add("aut-chi-reduce", "chi_P relations are recovered from the known relations", aut_chi_reduce);
        add("dim-cyclic-alpha1", "alpha=1 quotient has dimension 1 on {H1}", dim_cyclic_alpha1);
        add("dim-cyclic-generic", "generic alpha quotient has dimension 2 on {H1,H3}", dim_cyclic_generic);
        add("dim-noncyclic", "non-cyclic quotient has dimension 1 on X1", dim_noncyclic);
        add("holbar-gamma1", "HolBar on Gamma1 gives Gamma1 - Gamma2 = r(H3 - H2)", holbar_gamma1);
        add("iota-expansion-g", "iota(G) = H1 + H3 - 2 H4", iota_g);
        add("iota-expansion-r6-form", "2r*iota(G) against R6 and the 4-leg relations", iota_r6_form);
        add("iota-t-scaled", "iota of the t-scaled generator agrees", iota_scaled);
        add("kernel-generator-vanishes", "2H1+H4-2H3-H2 reduces to zero at alpha=1", kernel_vanishes);
        add("kernel-generic-nonvanishing", "the kernel vector survives at 5 generic alphas", kernel_generic);
        add("kernel-image-nonzero", "the kernel vector equals 3(H1-H3) mod the 4-leg relations",
            kernel_image_nonzero);
        add("lemma42-r6-elimination", "eliminating D,G intermediates yields R6", lemma42_r6_elimination);
        add("lemma42-r6-reduces-to-zero", "R6 lies in the span of the six relations", lemma42_r6_reduces);
        add("lemma42-relations", "the six oplus-3 relations, verbatim", lemma42_relations_scenario);
        add("lemma45-relations", "the two 4-leg relations with distinct two-leg tokens", lemma45_scenario);
        add("lollipop-delta-one-third", "lollipop elimination carries 1/delta(1) = 1/3", lollipop_third);
        add("noncyclic-2y1", "2Y1 = X1 - X2", noncyclic_2y1);
        add("noncyclic-2y2-3x1", "2Y2 - 3X1 is lower order", noncyclic_2y2);
        add("noncyclic-mu-trivial", "a repeated-label generator is trivial", noncyclic_mu_trivial);
        add("noncyclic-x1px2", "X1 + X2 = -(two-leg token)", noncyclic_x1px2);
        add("psi2-pairing-counts", "(2m-1)!! pairings", psi2_counts);
        add("reduc4-as-degenerate", "equal legs at a vertex vanish", reduc4_as_degenerate);
        add("reduc4-exponent-step", "the exponent-2 step of reduc4", reduc4_exponent_step);
        add("reduc4-h-basis-units", "reduc4 fixes the H basis", reduc4_units);
        add("reduc6-as-degenerate", "equal legs at a tripod vanish", reduc6_as_degenerate);
        add("reduc6-gamma-units", "reduc6 fixes Gamma1, Gamma2 and folds Gamma3", reduc6_units);
        add("ring-bar-involution", "bar swaps t and t^-1", ring_bar_involution);
        add("ring-mod-delta", "reduction modulo the annihilator", ring_mod_delta);
        add("ring-split-f14", "the f_14 excess of the appendix", ring_split_f14);
        add("ring-split-noncyclic", "-t/(1+t) = 1/(1+t) - 1", ring_split_noncyclic);
        add("zero-leg-pairing", "a zero leg pairs with its one partner", zero_leg_pairing);
        add("zero-leg-quotient-h", "zero-leg elimination drops to lower order on H", zero_leg_quotient_h);
        std::sort(s.begin(), s.end(), [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
        return s;
    }();
    return scenarios;
}

} // namespace

std::vector<std::string> scenario_ids() {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.id);
    return out;
}

std::string scenario_description(const std::string& id) {
    for (const auto& s : registry()) {
        if (s.id == id) return s.description;
    }
    throw UnknownScenario("unknown scenario: " + id);
}

ScenarioReport run_scenario(const std::string& id, const VerifyOptions& opt) {
    const Scenario* found = nullptr;
    for (const auto& s : registry()) {
        if (s.id == id) found = &s;
    }
    if (!found) throw UnknownScenario("unknown scenario: " + id);
    ScenarioReport report;
    report.id = id;
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome o = found->run(opt);
        report.status = o.ok ? "pass" : "fail";
        report.computed = o.computed;
        report.expected = o.expected;
    } catch (const std::exception& e) {
        report.status = "error";
        report.computed = e.what();
        report.expected = "";
    }
    report.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SuiteResult run_suite(const VerifyOptions& opt) {
    SuiteResult out;
    bool any_error = false;
    for (const auto& s : registry()) {
        if (!opt.filter.empty() && s.id.rfind(opt.filter, 0) != 0) continue;
        ScenarioReport r = run_scenario(s.id, opt);
        if (r.status == "pass") ++out.pass;
        else ++out.fail;
        if (r.status == "error") any_error = true;
        out.reports.push_back(std::move(r));
    }
    std::sort(out.reports.begin(), out.reports.end(),
              [](const ScenarioReport& a, const ScenarioReport& b) { return a.id < b.id; });
    out.exit_code = any_error ? 2 : (out.fail > 0 ? 1 : 0);
    return out;
}

std::string report_text(const SuiteResult& suite) {
    std::ostringstream out;
    for (const auto& r : suite.reports) {
        out << (r.status == "pass" ? "PASS" : (r.status == "fail" ? "FAIL" : "ERROR")) << ' ' << r.id;
        if (r.status != "pass") {
            out << "\n  computed: " << r.computed << "\n  expected: " << r.expected;
        }
        out << '\n';
    }
    out << suite.pass << " passed, " << suite.fail << " failed\n";
    return out.str();
}

std::string report_json(const SuiteResult& suite) {
    nlohmann::ordered_json doc;
    doc["scenarios"] = nlohmann::ordered_json::array();
    for (const auto& r : suite.reports) {
        nlohmann::ordered_json item;
        item["id"] = r.id;
        item["status"] = r.status;
        item["computed"] = r.computed;
        item["expected"] = r.expected;
        item["ms"] = r.ms;
        doc["scenarios"].push_back(item);
    }
    doc["summary"]["pass"] = suite.pass;
    doc["summary"]["fail"] = suite.fail;
    return doc.dump(2) + "\n";
}

} // namespace jdr
