#include "jdr/textio.hpp"

#include "jdr/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jdr;

namespace {

std::mt19937_64 rng(101);

ParamPoly random_poly() {
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<unsigned> exp(0, 3);
    ParamPoly out;
    for (int i = 0; i < 4; ++i) {
        Exponents e{};
        for (auto& k : e) k = exp(rng) / 2;
        out.add_term(e, Rational(coeff(rng), den(rng)));
    }
    return out;
}

LaurentPoly random_laurent() {
    std::uniform_int_distribution<int> exp(-3, 3);
    LaurentPoly out;
    for (int i = 0; i < 3; ++i) out.add_term(exp(rng), random_poly());
    return out;
}

Leg random_leg(bool noncyclic) {
    std::uniform_int_distribution<int> exp(-2, 2);
    std::uniform_int_distribution<int> copy(1, 3);
    std::uniform_int_distribution<int> letter(0, 1);
    if (noncyclic && letter(rng)) return e(0, copy(rng));
    return g(noncyclic ? 0 : exp(rng), copy(rng));
}

GenKey random_key() {
    std::uniform_int_distribution<int> kind(0, 3);
    GenKey key;
    switch (kind(rng)) {
    case 0:
        key.kind = GenKey::Kind::YY;
        for (int i = 0; i < 6; ++i) key.legs.push_back(random_leg(false));
        break;
    case 1:
        key.kind = GenKey::Kind::H;
        for (int i = 0; i < 4; ++i) key.legs.push_back(random_leg(true));
        break;
    case 2:
        key.kind = GenKey::Kind::Ladder;
        key.legs = {random_leg(false), random_leg(false)};
        break;
    default:
        key.kind = GenKey::Kind::LoopStem;
        key.loop_exp = 2;
        key.legs = {random_leg(false), random_leg(false)};
        break;
    }
    return key;
}

} // namespace

TEST(TextIO, PolynomialRoundTrip) {
    for (int i = 0; i < 200; ++i) {
        ParamPoly p = random_poly();
        EXPECT_EQ(parse_param_poly(p.to_string()), p) << p.to_string();
    }
}

TEST(TextIO, LaurentRoundTrip) {
    for (int i = 0; i < 200; ++i) {
        LaurentPoly q = random_laurent();
        EXPECT_EQ(parse_laurent(q.to_string()), q) << q.to_string();
    }
}

TEST(TextIO, ComboRoundTrip) {
    const auto& reg = EssentialRegistry::cyclic2();
    CoeffCtx plain;
    for (int i = 0; i < 200; ++i) {
        LinCombo combo;
        for (int t = 0; t < 3; ++t) combo.add(random_key(), random_poly(), plain);
        EXPECT_EQ(parse_lincombo(combo.to_string(&reg), &reg), combo) << combo.to_string(&reg);
    }
}

TEST(TextIO, SpecFormatExamples) {
    ParamPoly p = parse_param_poly("3/2*a*b^2");
    Exponents e{};
    e[static_cast<std::size_t>(Param::A)] = 1;
    e[static_cast<std::size_t>(Param::B)] = 2;
    EXPECT_EQ(p, ParamPoly::monomial(Rational(3, 2), e));
    LaurentPoly q = parse_laurent("3/2*a*b^2*t^-1 + r*t");
    EXPECT_EQ(q.coeff(-1), p);
    EXPECT_EQ(q.coeff(1), ParamPoly::variable(Param::R));

    const auto& reg = EssentialRegistry::cyclic2();
    LinCombo gamma = parse_lincombo("YY[(0,1),(0,2),(1,2);(0,1),(0,2),(1,2)]", &reg);
    EXPECT_EQ(gamma.terms().begin()->first, *reg.seed_of("Gamma1"));
    LinCombo h = parse_lincombo("H[(0,1),(0,2)|(0,1),(0,2)]", &reg);
    EXPECT_EQ(h.terms().begin()->first, *reg.seed_of("H1"));
    LinCombo combo = parse_lincombo("2*H[(0,1),(0,2)|(0,1),(0,2)] - r*YY[(0,1),(0,2),(1,2);(0,1),(0,2),(1,2)]",
                                    &reg);
    EXPECT_EQ(combo.coeff(*reg.seed_of("H1")), ParamPoly(2));
    EXPECT_EQ(combo.coeff(*reg.seed_of("Gamma1")), -ParamPoly::variable(Param::R));

    const auto& nreg = EssentialRegistry::noncyclic3();
    LinCombo x1 = parse_lincombo("H[(g,1),(g,2)|(e,1),(e,2)]", &nreg);
    EXPECT_EQ(x1.terms().begin()->first, *nreg.seed_of("X1"));
}

TEST(TextIO, Errors) {
    EXPECT_THROW(parse_param_poly("3*"), ParseError);
    EXPECT_THROW(parse_param_poly("t + 1"), ParseError);      // not t-free
    EXPECT_THROW(parse_param_poly("(a"), ParseError);         // unbalanced
    EXPECT_THROW(parse_laurent("x + 1"), ParseError);         // unknown name
    EXPECT_THROW(parse_lincombo("H1 * H2", &EssentialRegistry::cyclic2()), ParseError);
    EXPECT_THROW(parse_lincombo("YY[(0,1),(0,2)]", &EssentialRegistry::cyclic2()), ParseError);
    EXPECT_THROW(parse_lincombo("H1 + a", &EssentialRegistry::cyclic2()), ParseError);
    EXPECT_THROW(parse_lincombo("t*H1", &EssentialRegistry::cyclic2()), ParseError);
}
