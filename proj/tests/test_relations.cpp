#include "jdr/relations.hpp"

#include "jdr/errors.hpp"
#include "jdr/textio.hpp"

#include <gtest/gtest.h>

using namespace jdr;

namespace {

ReduceContext sym3() { return ReduceContext::cyclic3(AnnihilatorSpec::cyclic_symbolic(), Mode::Full); }
ReduceContext lam() { return ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Quotient, true); }

LinCombo parse_vec(const std::string& text, const ReduceContext& ctx) {
    LinCombo raw = parse_lincombo(text, ctx.registry);
    LinCombo out;
    for (const auto& [k, c] : raw.terms()) out.add(k, c, ctx.coeff);
    return out;
}

std::vector<LinCombo> lemma42_expected(const ReduceContext& ctx) {
    std::vector<LinCombo> out;
    for (const char* t : {"D1 - D2", "(alpha+2)*D1 - r*H3 + r*H4", "alpha*G1 + 2*G2 - r*H1",
                          "G1 + alpha*G2 + G4 - r*H3", "alpha*G3 + 2*G4 - r*H4",
                          "(alpha+1)*G2 + G3 - r*H2"}) {
        out.push_back(parse_vec(t, ctx));
    }
    return out;
}

} // namespace

TEST(Cyclic3, SixRelationsSpanTheGeneratedSet) {
    ReduceContext ctx = sym3();
    auto rels = cyclic3_relations(ctx);
    std::vector<LinCombo> vecs;
    for (const auto& r : rels) vecs.push_back(r.vec);
    auto want = lemma42_expected(ctx);
    std::vector<LinCombo> ambient = want;
    for (const auto& rel : lemma45_relations(ctx)) ambient.push_back(rel.vec);
    for (const auto& w : want) EXPECT_TRUE(reduce_against(w, vecs, ctx.coeff).is_zero());
    for (const auto& v : vecs) {
        EXPECT_TRUE(reduce_against(v, ambient, ctx.coeff).is_zero()) << v.to_string(ctx.registry);
    }
}

TEST(Cyclic3, RelationsFromAlternateFormsAddNothing) {
    // Apply Aut_t and HolBar to the alternate generator forms of the figures
    // and check every relation still lies in the ambient span.
    ReduceContext ctx = sym3();
    std::vector<LinCombo> ambient = lemma42_expected(ctx);
    for (const auto& rel : lemma45_relations(ctx)) ambient.push_back(rel.vec);

    const std::vector<std::vector<Leg>> forms = {
        {g(1, 1), g(0, 2), g(1, 2), g(1, 1), g(0, 3), g(1, 3)},  // D1 alternate
        {g(0, 1), g(0, 2), g(1, 3), g(0, 1), g(0, 2), g(1, 3)},  // G1 alternates
        {g(0, 1), g(0, 2), g(0, 3), g(1, 1), g(1, 2), g(1, 3)},
        {g(0, 1), g(0, 2), g(1, 3), g(0, 1), g(1, 2), g(1, 3)},  // G2 alternates
        {g(0, 1), g(0, 2), g(0, 3), g(0, 1), g(1, 2), g(1, 3)},
        {g(0, 1), g(1, 2), g(1, 3), g(1, 1), g(0, 2), g(1, 3)},  // G3 alternate
    };
    for (const auto& legs : forms) {
        GeneralDiagram d;
        d.kind = GenKey::Kind::YY;
        for (const auto& l : legs) d.legs.push_back(FormalLeg::monomial(l));
        for (int i = 0; i < 6; ++i) {
            for (int j = i + 1; j < 6; ++j) d.set_linking(i, j, linking_numerator(legs[i], legs[j], ctx.spec));
        }
        LinCombo lhs = reduce_key(GenKey{GenKey::Kind::YY, legs, 0}, ctx);
        for (int copy = 1; copy <= 3; ++copy) {
            for (int dir : {1, -1}) {
                GeneralDiagram img = d;
                for (int i = 0; i < 6; ++i) {
                    if (legs[i].copy == copy) img.legs[i] = img.legs[i].shifted(dir);
                }
                LinCombo rel = lhs;
                rel -= omega_reduce(img, ctx);
                EXPECT_TRUE(reduce_against(rel, ambient, ctx.coeff).is_zero());
            }
        }
    }
}

TEST(Cyclic3, R6ByExactElimination) {
    ReduceContext ctx = sym3();
    auto want6 = lemma42_expected(ctx);
    std::vector<GenKey> elim = {*ctx.registry->seed_of("D1"), *ctx.registry->seed_of("D2"),
                                *ctx.registry->seed_of("G2"), *ctx.registry->seed_of("G3"),
                                *ctx.registry->seed_of("G4")};
    auto remaining = eliminate_generators(want6, elim, ctx.coeff);
    ASSERT_EQ(remaining.size(), 1u);
    LinCombo r6 = normalize_relation(parse_vec(
        "(1-alpha)*(alpha+2)^2*G1 - 4*r*H3 - 2*alpha*r*H2 + 2*r*H4 + alpha*(alpha+3)*r*H1", ctx));
    // remaining = scale * r6 with a polynomial scale
    auto scale = divide_exact(remaining[0].coeff(*ctx.registry->seed_of("G1")),
                              r6.coeff(*ctx.registry->seed_of("G1")));
    ASSERT_TRUE(scale.has_value());
    for (const auto& [k, c] : remaining[0].terms()) {
        auto q = divide_exact(c, *scale);
        ASSERT_TRUE(q.has_value());
        EXPECT_EQ(*q, r6.coeff(k));
    }
    // and R6 reduces to zero against the six
    EXPECT_TRUE(reduce_against(r6, want6, ctx.coeff).is_zero());
}

TEST(Cyclic3, Lemma45TokensAreDistinct) {
    ReduceContext ctx = sym3();
    auto rels = lemma45_relations(ctx);
    ASSERT_EQ(rels.size(), 2u);
    GenKey tok1, tok2;
    int tokens = 0;
    for (const auto& rel : rels) {
        for (const auto& [k, c] : rel.vec.terms()) {
            if (k.kind == GenKey::Kind::Ladder) {
                (tokens == 0 ? tok1 : tok2) = k;
                ++tokens;
            }
        }
    }
    ASSERT_EQ(tokens, 2);
    EXPECT_NE(tok1, tok2);
}

TEST(Lambda, RelationsAndThirtyPointSpecialization) {
    ReduceContext ctx = lam();
    const LinCombo k_vec = parse_vec("Gamma1 + 2*Gamma2 - 3*r*H3", ctx);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"Gamma1", "a*b + c*d"}, {"Gamma2", "a^2 + c^2"}, {"Gamma3", "b^2 + d^2 - 1"}};
    auto points = lambda_constraint_samples(30, 97);
    for (const auto& [gamma, scalar] : cases) {
        Relation rel = lambda_relation(gamma, ctx);
        LinCombo want = parse_vec("(" + scalar + ")*(Gamma1 + 2*Gamma2 - 3*r*H3)", ctx);
        LinCombo neg;
        neg.add_scaled(rel.vec, ParamPoly(-1), ctx.coeff);
        EXPECT_TRUE(rel.vec == want || neg == want) << gamma;
        EXPECT_TRUE(reduce_against(rel.vec, {k_vec}, ctx.coeff).is_zero());
        // specialization: at each constraint point the relation is the
        // predicted scalar multiple of K
        ParamPoly scalar_poly = param_normalize(parse_param_poly(scalar), true);
        const LinCombo& vec = rel.vec == want ? rel.vec : neg;
        for (const auto& [a, b, c, d] : points) {
            std::array<Rational, kParamCount> vals = {Rational(1), a, b, c, d, Rational(0)};
            // r stays formal: compare coefficients as polynomials in r by
            // substituting the abcd values only
            const Rational s = scalar_poly.eval({Rational(1), a, b, c, d, Rational(0)});
            for (const auto& [key, coeff] : k_vec.terms()) {
                ParamPoly got = vec.coeff(key);
                for (Param p : {Param::A, Param::B, Param::C, Param::D}) {
                    got = got.substitute(p, vals[static_cast<std::size_t>(p)]);
                }
                ParamPoly expect = coeff * ParamPoly(s);
                EXPECT_EQ(got, expect);
            }
        }
    }
}

TEST(Lambda, UnitParameterActionIsTrivial) {
    // lambda_{0,1,0,0} maps gamma_1 -> gamma_1 and gamma_2 -> -gamma_2, and
    // Gamma1 carries four copy-2 legs, so the relation is 0 = 0.
    ReduceContext ctx = lam();
    Relation rel = apply_aut("Gamma1", AutSpec::lambda(ParamPoly(0), ParamPoly(1), ParamPoly(0), ParamPoly(0)),
                             ctx);
    EXPECT_TRUE(rel.trivial());
}

TEST(Lambda, ImageExpansionMatchesNestedLoopCount) {
    // The lambda image of Gamma1's six legs (four monomials each) expands to
    // at most 4^6 raw terms; the canonical term count matches an independent
    // nested-loop expansion.
    ReduceContext ctx = lam();
    GenKey gamma1 = *ctx.registry->seed_of("Gamma1");
    AutSpec lambda = AutSpec::lambda_symbolic();
    std::vector<FormalLeg> legs;
    for (const auto& l : gamma1.legs) {
        FormalLeg img;
        if (l.copy == 1) {
            img.parts = {{lambda.la, Leg{l.exp + 1, 1, BasisLetter::Gamma}},
                         {lambda.lb, Leg{l.exp, 1, BasisLetter::Gamma}},
                         {lambda.lc, Leg{l.exp + 1, 2, BasisLetter::Gamma}},
                         {lambda.ld, Leg{l.exp, 2, BasisLetter::Gamma}}};
        } else {
            img.parts = {{lambda.lc, Leg{l.exp - 1, 1, BasisLetter::Gamma}},
                         {lambda.ld, Leg{l.exp, 1, BasisLetter::Gamma}},
                         {-lambda.la, Leg{l.exp - 1, 2, BasisLetter::Gamma}},
                         {-lambda.lb, Leg{l.exp, 2, BasisLetter::Gamma}}};
        }
        legs.push_back(img);
    }
    LinCombo engine = expand_multilinear(GenKey::Kind::YY, legs, ctx);
    std::map<GenKey, ParamPoly> oracle;
    long raw = 0;
    std::array<int, 6> pickidx{};
    std::function<void(int, ParamPoly)> walk = [&](int i, ParamPoly c) {
        if (i == 6) {
            ++raw;
            std::vector<Leg> pick;
            for (int j = 0; j < 6; ++j) pick.push_back(legs[j].parts[pickidx[j]].second);
            Canonical can = canonicalize(GenKey{GenKey::Kind::YY, pick, 0}, ctx.registry);
            if (can.sign == 0) return;
            ParamPoly v = param_normalize(ParamPoly(can.sign) * c, true);
            auto [it, inserted] = oracle.emplace(can.key, v);
            if (!inserted) {
                it->second += v;
                if (it->second.is_zero()) oracle.erase(it);
            }
            return;
        }
        for (int j = 0; j < 4; ++j) {
            pickidx[i] = j;
            walk(i + 1, c * legs[i].parts[j].first);
        }
    };
    walk(0, ParamPoly(1));
    EXPECT_EQ(raw, 4096);
    EXPECT_EQ(engine.terms().size(), oracle.size());
    for (const auto& [k, c] : oracle) EXPECT_EQ(engine.coeff(k), c);
}

TEST(Omega, AdmissibleDiagramIsAFixpoint) {
    ReduceContext ctx = ReduceContext::cyclic2(AnnihilatorSpec::cyclic_symbolic(), Mode::Quotient);
    GenKey gamma2 = *ctx.registry->seed_of("Gamma2");
    GeneralDiagram d = admissible_diagram(GenKey::Kind::YY, gamma2.legs, ctx.spec);
    EXPECT_EQ(omega_reduce(d, ctx), ctx.unit("Gamma2"));
}

TEST(Lambda, RequiresAlphaOneConstraintQuotient) {
    EXPECT_THROW(lambda_relation("Gamma1", ReduceContext::cyclic2(AnnihilatorSpec::cyclic_symbolic(),
                                                                  Mode::Quotient)),
                 ConstraintViolated);
}

TEST(Chi, SamplesSatisfyTheUnitConstraint) {
    for (const auto& [a, b] : chi_constraint_samples(8)) {
        EXPECT_EQ(a * a + b * b - a * b, 1);
    }
}

TEST(Chi, RelationsReduceToZero) {
    ReduceContext ctx = ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Quotient);
    std::vector<LinCombo> known = {fold_h_relations(parse_vec("Gamma1 + 2*Gamma2 - 3*r*H3", ctx), ctx),
                                   fold_h_relations(parse_vec("Gamma1 - Gamma2 + r*H2 - r*H3", ctx), ctx)};
    for (const auto& [a, b] : chi_constraint_samples(5)) {
        for (const std::string g : {"Gamma1", "Gamma2"}) {
            Relation rel = apply_aut(g, AutSpec::chi(a, b), ctx);
            EXPECT_TRUE(reduce_against(fold_h_relations(rel.vec, ctx), known, ctx.coeff).is_zero())
                << g << " chi(" << rational_to_string(a) << ',' << rational_to_string(b) << ')';
        }
    }
}

TEST(Kernel, VanishesAtOneSurvivesElsewhere) {
    {
        ReduceContext ctx = ReduceContext::cyclic3(AnnihilatorSpec::cyclic(Rational(1)), Mode::Full);
        std::vector<LinCombo> rels;
        for (const auto& r : cyclic3_relations(ctx)) rels.push_back(r.vec);
        LinCombo d = parse_vec("2*H1 + H4 - 2*H3 - H2", ctx);
        EXPECT_TRUE(reduce_against(d, rels, ctx.coeff).is_zero());
    }
    for (const Rational alpha : {Rational(2), Rational(-1), Rational(5, 2)}) {
        ReduceContext ctx = ReduceContext::cyclic3(AnnihilatorSpec::cyclic(alpha), Mode::Full);
        std::vector<LinCombo> rels;
        for (const auto& r : cyclic3_relations(ctx)) rels.push_back(r.vec);
        LinCombo d = parse_vec("2*H1 + H4 - 2*H3 - H2", ctx);
        EXPECT_FALSE(reduce_against(d, rels, ctx.coeff).is_zero()) << rational_to_string(alpha);
    }
}

TEST(Kernel, ImageUnderFourLegRelations) {
    ReduceContext ctx = lam();
    LinCombo img = fold_h_relations(parse_vec("2*H1 + H4 - 2*H3 - H2", ctx), ctx);
    EXPECT_EQ(img, fold_h_relations(parse_vec("3*H1 - 3*H3", ctx), ctx));
    EXPECT_FALSE(img.is_zero());
}

TEST(Ranks, DimensionsOfTheQuotients) {
    ReduceContext ctx = sym3();
    std::vector<LinCombo> four_leg;
    for (const auto& rel : lemma45_relations(ctx)) four_leg.push_back(rel.vec.without_lower_order());
    // generic alpha: rank 2, dimension 2 on {H1, H3}
    for (const Rational alpha : {Rational(5), Rational(-3), Rational(7, 2)}) {
        std::array<Rational, kParamCount> sample = {alpha, Rational(2), Rational(3), Rational(5), Rational(7),
                                                    Rational(2)};
        EXPECT_EQ(rank_at_specialization(four_leg, sample), 2);
    }
    // alpha = 1: R6 collapses onto the H space, rank 3, dimension 1
    std::vector<LinCombo> at_one;
    for (const auto& v : four_leg) {
        LinCombo s;
        CoeffCtx plain;
        for (const auto& [k, c] : v.terms()) s.add(k, c.substitute(Param::Alpha, Rational(1)), plain);
        at_one.push_back(s);
    }
    LinCombo r6 = parse_vec("(1-alpha)*(alpha+2)^2*G1 - 4*r*H3 - 2*alpha*r*H2 + 2*r*H4 + alpha*(alpha+3)*r*H1",
                            ctx);
    LinCombo r6_at_one;
    {
        CoeffCtx plain;
        for (const auto& [k, c] : r6.terms()) r6_at_one.add(k, c.substitute(Param::Alpha, Rational(1)), plain);
    }
    at_one.push_back(r6_at_one);
    std::array<Rational, kParamCount> sample = {Rational(1), Rational(2), Rational(3), Rational(5), Rational(7),
                                                Rational(2)};
    EXPECT_EQ(rank_at_specialization(at_one, sample), 3);
    // empty relation set has rank 0
    EXPECT_EQ(rank_at_specialization({}, sample), 0);
    // constraint guards
    std::array<Rational, kParamCount> bad_alpha = sample;
    bad_alpha[0] = Rational(-2);
    EXPECT_THROW(rank_at_specialization(four_leg, bad_alpha), ConstraintViolated);
    std::array<Rational, kParamCount> bad_r = sample;
    bad_r[5] = Rational(0);
    EXPECT_THROW(rank_at_specialization(four_leg, bad_r), ConstraintViolated);
}

TEST(NonCyclicRelations, TheThreeIdentities) {
    ReduceContext ctx = ReduceContext::noncyclic3(Mode::Full);
    auto rels = noncyclic_relations(ctx);
    auto contains = [&](const std::string& text) {
        LinCombo want = normalize_relation(parse_vec(text, ctx));
        for (const auto& rel : rels) {
            if (rel.vec == want) return true;
            LinCombo main = rel.vec.without_lower_order();
            if (normalize_relation(main) == want && rel.vec.terms().size() != main.terms().size()) return true;
        }
        return false;
    };
    EXPECT_TRUE(contains("2*Y1 - X1 + X2"));
    EXPECT_TRUE(contains("2*Y2 - 3*X1"));
    EXPECT_TRUE(contains("X1 + X2 + ladder[(g,1),(e,1)]"));
}

TEST(AutComposition, InverseParametersGiveTrivialRelations) {
    // The relation from t followed by the relation from t^-1 composes to a
    // consequence of the generated set.
    ReduceContext ctx = sym3();
    std::vector<LinCombo> all;
    for (const auto& r : cyclic3_relations(ctx)) all.push_back(r.vec);
    for (const auto& r : lemma45_relations(ctx)) all.push_back(r.vec);
    for (const std::string gname : {"G2", "D2", "H3"}) {
        for (int copy = 1; copy <= (gname[0] == 'H' ? 2 : 3); ++copy) {
            Relation up = apply_aut(gname, AutSpec::aut_t(copy, +1), ctx);
            Relation down = apply_aut(gname, AutSpec::aut_t(copy, -1), ctx);
            // lhs - rhs_up and lhs - rhs_down are both relations; their sum
            // ("apply twice with inverse parameters") must be recoverable.
            LinCombo composed = up.vec;
            composed += down.vec;
            EXPECT_TRUE(reduce_against(composed, all, ctx.coeff).is_zero()) << gname << ' ' << copy;
        }
    }
}

TEST(ReduceAgainst, SelfAndEmpty) {
    ReduceContext ctx = sym3();
    LinCombo rel = parse_vec("alpha*G1 + 2*G2 - r*H1", ctx);
    EXPECT_TRUE(reduce_against(rel, {rel}, ctx.coeff).is_zero());
    EXPECT_FALSE(reduce_against(rel, {}, ctx.coeff).is_zero());
    EXPECT_TRUE(reduce_against(LinCombo(), {rel}, ctx.coeff).is_zero());
}
