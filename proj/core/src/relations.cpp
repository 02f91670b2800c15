#include "jdr/relations.hpp"

#include "jdr/errors.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>

namespace jdr {

namespace {

// --- exact fractions over the coefficient ring --------------------------------

struct ParamFrac {
    ParamPoly num;
    ParamPoly den = ParamPoly(1);

    bool is_zero() const { return num.is_zero(); }
};

ParamFrac frac_trim(ParamFrac f) {
    if (f.num.is_zero()) return ParamFrac{ParamPoly(), ParamPoly(1)};
    if (f.num == f.den) return ParamFrac{ParamPoly(1), ParamPoly(1)};
    const Rational cn = f.num.content();
    const Rational cd = f.den.content();
    if (cn != 0 && cd != 0 && (cn != 1 || cd != 1)) {
        ParamPoly num, den;
        for (const auto& [e, c] : f.num.terms()) num.add_term(e, c / cn);
        for (const auto& [e, c] : f.den.terms()) den.add_term(e, c / cd);
        ParamPoly scaled;
        const Rational q = cn / cd;
        for (const auto& [e, c] : num.terms()) scaled.add_term(e, c * q);
        return ParamFrac{scaled, den};
    }
    return f;
}

ParamFrac frac_add(const ParamFrac& a, const ParamFrac& b, const CoeffCtx& ctx) {
    return frac_trim(ParamFrac{ctx.mul(a.num, b.den) + ctx.mul(b.num, a.den), ctx.mul(a.den, b.den)});
}

ParamFrac frac_mul(const ParamFrac& a, const ParamFrac& b, const CoeffCtx& ctx) {
    return frac_trim(ParamFrac{ctx.mul(a.num, b.num), ctx.mul(a.den, b.den)});
}

ParamFrac frac_neg(const ParamFrac& a) { return ParamFrac{-a.num, a.den}; }

ParamFrac frac_div(const ParamFrac& a, const ParamFrac& b, const CoeffCtx& ctx) {
    assert(!b.is_zero());
    return frac_trim(ParamFrac{ctx.mul(a.num, b.den), ctx.mul(a.den, b.num)});
}

using Row = std::map<GenKey, ParamFrac>;

Row row_of(const LinCombo& v) {
    Row row;
    for (const auto& [k, c] : v.terms()) row.emplace(k, ParamFrac{c, ParamPoly(1)});
    return row;
}

void row_prune(Row& row) {
    for (auto it = row.begin(); it != row.end();) {
        if (it->second.is_zero()) it = row.erase(it);
        else ++it;
    }
}

// row -= c * pivot. `c` is taken by value: callers pass a reference into
// `row` itself, which this loop overwrites.
void row_axpy(Row& row, const ParamFrac c, const Row& pivot, const CoeffCtx& ctx) {
    for (const auto& [k, v] : pivot) {
        ParamFrac delta = frac_mul(c, v, ctx);
        auto it = row.find(k);
        if (it == row.end()) {
            if (!delta.is_zero()) row.emplace(k, frac_neg(delta));
        } else {
            it->second = frac_add(it->second, frac_neg(delta), ctx);
        }
    }
    row_prune(row);
}

// Gauss-Jordan over the fraction field with deterministic pivots. `prefer`
// assigns pivot priority classes: lower class keys are eliminated first.
// Returns (pivot key, row) pairs; each row has coefficient 1 at its pivot.
std::vector<std::pair<GenKey, Row>> echelonize(std::vector<Row> rows, const CoeffCtx& ctx,
                                               const std::map<GenKey, int>* prefer = nullptr) {
    auto key_rank = [&](const GenKey& k) {
        if (!prefer) return std::pair<int, GenKey>(0, k);
        auto it = prefer->find(k);
        return std::pair<int, GenKey>(it == prefer->end() ? 1 : it->second, k);
    };
    std::vector<std::pair<GenKey, Row>> done;
    while (true) {
        int best = -1;
        std::optional<std::pair<int, GenKey>> best_key;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (rows[i].empty()) continue;
            auto lead = key_rank(rows[i].begin()->first);
            for (const auto& [k, v] : rows[i]) {
                auto rank = key_rank(k);
                if (rank < lead) lead = rank;
            }
            if (!best_key || lead < *best_key) {
                best = i;
                best_key = lead;
            }
        }
        if (best < 0) break;
        Row pivot = rows[best];
        rows.erase(rows.begin() + best);
        const GenKey pk = best_key->second;
        const ParamFrac pc = pivot.at(pk);
        for (auto& [k, v] : pivot) v = frac_div(v, pc, ctx);
        for (auto& row : rows) {
            auto it = row.find(pk);
            if (it != row.end()) row_axpy(row, it->second, pivot, ctx);
        }
        for (auto& [dk, row] : done) {
            auto it = row.find(pk);
            if (it != row.end()) row_axpy(row, it->second, pivot, ctx);
        }
        done.emplace_back(pk, std::move(pivot));
    }
    return done;
}

LinCombo row_to_combo(const Row& row, const CoeffCtx& ctx) {
    // Clear denominators (multiply through by every other entry's
    // denominator), then normalize content and sign.
    LinCombo out;
    for (const auto& [k, v] : row) {
        ParamPoly factor(1);
        for (const auto& [k2, v2] : row) {
            if (!(k2 == k)) factor = ctx.mul(factor, v2.den);
        }
        out.add(k, ctx.mul(v.num, factor), ctx);
    }
    return normalize_relation(out);
}

std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Rational small_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return Rational(num(rng), den(rng));
}

bool rational_sqrt(const Rational& q, Rational& out) {
    if (q < 0) return false;
    if (q == 0) {
        out = 0;
        return true;
    }
    const Integer n = numerator(q), d = denominator(q);
    const Integer sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rational(sn, sd);
    return true;
}

} // namespace

AutSpec AutSpec::aut_t(int copy, int direction) {
    AutSpec a;
    a.kind = Kind::AutT;
    a.copy = copy;
    a.direction = direction;
    return a;
}

AutSpec AutSpec::holbar(int tripod) {
    AutSpec a;
    a.kind = Kind::HolBar;
    a.tripod = tripod;
    return a;
}

AutSpec AutSpec::lambda(const ParamPoly& a, const ParamPoly& b, const ParamPoly& c, const ParamPoly& d) {
    AutSpec s;
    s.kind = Kind::AutLambda;
    s.la = a;
    s.lb = b;
    s.lc = c;
    s.ld = d;
    return s;
}

AutSpec AutSpec::lambda_symbolic() {
    return lambda(ParamPoly::variable(Param::A), ParamPoly::variable(Param::B),
                  ParamPoly::variable(Param::C), ParamPoly::variable(Param::D));
}

AutSpec AutSpec::chi(const Rational& a, const Rational& b) {
    AutSpec s;
    s.kind = Kind::AutChi;
    s.chi_a = a;
    s.chi_b = b;
    return s;
}

AutSpec AutSpec::mu(const Rational& x, int copy) {
    AutSpec s;
    s.kind = Kind::Mu;
    s.mu_x = x;
    s.copy = copy;
    return s;
}

AutSpec AutSpec::nu(int copy) {
    AutSpec s;
    s.kind = Kind::Nu;
    s.copy = copy;
    return s;
}

AutSpec AutSpec::rho(const Rational& y, int copy) {
    AutSpec s;
    s.kind = Kind::Rho;
    s.rho_y = y;
    s.copy = copy;
    return s;
}

std::string AutSpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
    case Kind::AutT:
        out << "aut_t(copy " << copy << ", t^" << direction << ")";
        break;
    case Kind::HolBar:
        out << "holbar(tripod " << tripod << ")";
        break;
    case Kind::AutLambda:
        out << "lambda[" << la.to_string() << ',' << lb.to_string() << ',' << lc.to_string() << ','
            << ld.to_string() << ']';
        break;
    case Kind::AutChi:
        out << "chi[" << rational_to_string(chi_a) << "*t+" << rational_to_string(chi_b) << ']';
        break;
    case Kind::Mu:
        out << "mu(" << rational_to_string(mu_x) << ", copy " << copy << ")";
        break;
    case Kind::Nu:
        out << (copy == 0 ? std::string("nu(all copies)") : "nu(copy " + std::to_string(copy) + ")");
        break;
    case Kind::Rho:
        out << "rho(" << rational_to_string(rho_y) << ", copy " << copy << ")";
        break;
    }
    return out.str();
}

namespace {

FormalLeg aut_image(const Leg& l, const AutSpec& aut, const ReduceContext& ctx) {
    switch (aut.kind) {
    case AutSpec::Kind::AutT: {
        if (!ctx.spec.is_cyclic()) throw NonCyclicMode("Aut_t is a cyclic-case relation family");
        Leg img = l;
        if (l.copy == aut.copy) img.exp += aut.direction;
        return FormalLeg::monomial(img);
    }
    case AutSpec::Kind::HolBar: {
        // handled at the diagram level (all legs of one tripod)
        return FormalLeg::monomial(l);
    }
    case AutSpec::Kind::AutLambda: {
        FormalLeg out;
        if (l.copy == 1) {
            out.parts = {{aut.la, Leg{l.exp + 1, 1, BasisLetter::Gamma}},
                         {aut.lb, Leg{l.exp, 1, BasisLetter::Gamma}},
                         {aut.lc, Leg{l.exp + 1, 2, BasisLetter::Gamma}},
                         {aut.ld, Leg{l.exp, 2, BasisLetter::Gamma}}};
        } else {
            out.parts = {{aut.lc, Leg{l.exp - 1, 1, BasisLetter::Gamma}},
                         {aut.ld, Leg{l.exp, 1, BasisLetter::Gamma}},
                         {-aut.la, Leg{l.exp - 1, 2, BasisLetter::Gamma}},
                         {-aut.lb, Leg{l.exp, 2, BasisLetter::Gamma}}};
        }
        std::erase_if(out.parts, [](const auto& p) { return p.first.is_zero(); });
        return out;
    }
    case AutSpec::Kind::AutChi: {
        if (l.copy != 1) return FormalLeg::monomial(l);
        FormalLeg out;
        out.parts = {{ParamPoly(aut.chi_a), Leg{l.exp + 1, 1, BasisLetter::Gamma}},
                     {ParamPoly(aut.chi_b), Leg{l.exp, 1, BasisLetter::Gamma}}};
        std::erase_if(out.parts, [](const auto& p) { return p.first.is_zero(); });
        return out;
    }
    case AutSpec::Kind::Mu: {
        if (l.copy != aut.copy) return FormalLeg::monomial(l);
        const Rational c = l.letter == BasisLetter::Gamma ? aut.mu_x : Rational(1) / aut.mu_x;
        return FormalLeg{{{ParamPoly(c), l}}};
    }
    case AutSpec::Kind::Nu: {
        if (aut.copy != 0 && l.copy != aut.copy) return FormalLeg::monomial(l);
        Leg img = l;
        if (l.letter == BasisLetter::Gamma) {
            img.letter = BasisLetter::Eta;
            return FormalLeg::monomial(img);
        }
        img.letter = BasisLetter::Gamma;
        return FormalLeg{{{ParamPoly(-1), img}}};
    }
    case AutSpec::Kind::Rho: {
        if (l.copy != aut.copy || l.letter == BasisLetter::Eta) return FormalLeg::monomial(l);
        Leg eta = l;
        eta.letter = BasisLetter::Eta;
        return FormalLeg{{{ParamPoly(1), l}, {ParamPoly(aut.rho_y), eta}}};
    }
    }
    return FormalLeg::monomial(l);
}

} // namespace

Relation apply_aut(const std::string& generator, const AutSpec& aut, const ReduceContext& ctx) {
    auto seed = ctx.registry->seed_of(generator);
    if (!seed) throw std::logic_error("unknown essential generator: " + generator);
    const std::vector<Leg>& legs = seed->legs;
    const int n = static_cast<int>(legs.size());

    GeneralDiagram d;
    d.kind = seed->kind;
    if (aut.kind == AutSpec::Kind::HolBar) {
        if (seed->kind != GenKey::Kind::YY) throw std::invalid_argument("HolBar acts on YY generators");
        for (int i = 0; i < n; ++i) {
            const bool scaled = (i < 3) == (aut.tripod == 0);
            Leg img = legs[i];
            if (scaled) img.exp += 1;
            d.legs.push_back(FormalLeg::monomial(img));
        }
    } else {
        for (const auto& l : legs) d.legs.push_back(aut_image(l, aut, ctx));
    }
    // The automorphism preserves the pairing, so the image keeps the
    // generator's prescribed linkings; HolBar additionally multiplies the
    // cross-tripod linkings by t.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            LaurentPoly num = linking_numerator(legs[i], legs[j], ctx.spec);
            if (aut.kind == AutSpec::Kind::HolBar && (i < 3) != (j < 3)) {
                num = num.shifted(aut.tripod == 0 ? 1 : -1);
            }
            d.set_linking(i, j, num);
        }
    }
    Relation rel;
    rel.generator = generator;
    rel.provenance = aut.to_string();
    // The left side is the generator's class in the output basis (Gamma3,
    // say, reduces to Gamma1 through Aut_t).
    rel.vec = reduce_key(*seed, ctx);
    rel.vec -= omega_reduce(d, ctx);
    return rel;
}

LinCombo fold_h_relations(const LinCombo& v, const ReduceContext& ctx) {
    // H1 = -2 H2 and H4 = -H2 - H3 (the alpha = 1 forms, modulo lower order).
    const GenKey h1 = *ctx.registry->seed_of("H1");
    const GenKey h2 = *ctx.registry->seed_of("H2");
    const GenKey h3 = *ctx.registry->seed_of("H3");
    const GenKey h4 = *ctx.registry->seed_of("H4");
    LinCombo out;
    for (const auto& [k, c] : v.terms()) {
        if (k == h1) {
            out.add(h2, c * ParamPoly(-2), ctx.coeff);
        } else if (k == h4) {
            out.add(h2, -c, ctx.coeff);
            out.add(h3, -c, ctx.coeff);
        } else {
            out.add(k, c, ctx.coeff);
        }
    }
    return out;
}

Relation lambda_relation(const std::string& gamma, const ReduceContext& ctx) {
    if (!ctx.spec.is_cyclic() || !ctx.spec.annihilator.alpha || *ctx.spec.annihilator.alpha != 1 ||
        !ctx.coeff.lambda_constraint) {
        throw ConstraintViolated("the lambda relations run at alpha = 1 in the constraint quotient");
    }
    Relation rel = apply_aut(gamma, AutSpec::lambda_symbolic(), ctx);
    rel.vec = fold_h_relations(rel.vec, ctx);
    return rel;
}

LinCombo normalize_relation(const LinCombo& rel) {
    if (rel.is_zero()) return rel;
    // Integer-primitive coefficients, monomial content removed, sign fixed.
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    Exponents mono;
    mono.fill(UINT32_MAX);
    for (const auto& [k, c] : rel.terms()) {
        for (const auto& [e, q] : c.terms()) {
            num_gcd = gcd(num_gcd, numerator(q));
            den_lcm = lcm(den_lcm, denominator(q));
            for (std::size_t i = 0; i < kParamCount; ++i) mono[i] = std::min(mono[i], e[i]);
        }
    }
    const Rational scale = Rational(den_lcm, num_gcd);
    CoeffCtx plain;
    LinCombo out;
    for (const auto& [k, c] : rel.terms()) {
        ParamPoly scaled;
        for (const auto& [e, q] : c.terms()) {
            Exponents reduced = e;
            for (std::size_t i = 0; i < kParamCount; ++i) reduced[i] -= mono[i];
            scaled.add_term(reduced, q * scale);
        }
        out.add(k, scaled, plain);
    }
    const auto& first = *out.terms().begin();
    const Rational lead = first.second.terms().rbegin()->second;
    if (lead < 0) {
        LinCombo neg;
        for (const auto& [k, c] : out.terms()) neg.add(k, -c, plain);
        return neg;
    }
    return out;
}

LinCombo reduce_against(const LinCombo& rel, const std::vector<LinCombo>& known, const CoeffCtx& ctx) {
    std::vector<Row> rows;
    rows.reserve(known.size());
    for (const auto& k : known) rows.push_back(row_of(k));
    auto basis = echelonize(std::move(rows), ctx);
    Row r = row_of(rel);
    for (const auto& [pk, pivot] : basis) {
        auto it = r.find(pk);
        if (it != r.end()) row_axpy(r, it->second, pivot, ctx);
    }
    if (r.empty()) return LinCombo();
    return row_to_combo(r, ctx);
}

std::vector<LinCombo> eliminate_generators(const std::vector<LinCombo>& relations,
                                           const std::vector<GenKey>& eliminate, const CoeffCtx& ctx) {
    std::map<GenKey, int> prefer;
    for (const auto& k : eliminate) prefer[k] = 0;
    std::vector<Row> rows;
    rows.reserve(relations.size());
    for (const auto& rel : relations) rows.push_back(row_of(rel));
    auto basis = echelonize(std::move(rows), ctx, &prefer);
    std::vector<LinCombo> out;
    for (const auto& [pk, row] : basis) {
        bool touches = false;
        for (const auto& k : eliminate) {
            if (row.count(k)) touches = true;
        }
        if (!touches && !row.empty()) out.push_back(row_to_combo(row, ctx));
    }
    return out;
}

int rank_at_specialization(const std::vector<LinCombo>& relations,
                           const std::array<Rational, kParamCount>& sample) {
    if (sample[static_cast<std::size_t>(Param::Alpha)] == -2) {
        throw ConstraintViolated("alpha = -2 is outside the admitted annihilators");
    }
    if (sample[static_cast<std::size_t>(Param::R)] == 0) {
        throw ConstraintViolated("the pairing scalar r must be nonzero");
    }
    std::set<GenKey> keys;
    for (const auto& rel : relations) {
        for (const auto& [k, c] : rel.terms()) keys.insert(k);
    }
    std::vector<GenKey> cols(keys.begin(), keys.end());
    std::vector<std::vector<Rational>> m;
    for (const auto& rel : relations) {
        std::vector<Rational> row(cols.size(), Rational(0));
        for (std::size_t j = 0; j < cols.size(); ++j) row[j] = rel.coeff(cols[j]).eval(sample);
        m.push_back(std::move(row));
    }
    int rank = 0;
    std::size_t col = 0;
    for (; col < cols.size() && rank < static_cast<int>(m.size()); ++col) {
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(m.size()); ++i) {
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == rank || m[i][col] == 0) continue;
            const Rational f = m[i][col] / m[rank][col];
            for (std::size_t j = col; j < cols.size(); ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

namespace {

void collect(std::vector<Relation>& out, Relation rel) {
    if (rel.trivial()) return;
    rel.vec = normalize_relation(rel.vec);
    for (const auto& have : out) {
        if (have.vec == rel.vec) return;
    }
    out.push_back(std::move(rel));
}

} // namespace

std::vector<Relation> cyclic3_relations(const ReduceContext& ctx) {
    std::vector<Relation> out;
    const std::vector<std::string> gens = {"D1", "D2", "G1", "G2", "G3", "G4"};
    for (const auto& g : gens) {
        for (int copy = 1; copy <= 3; ++copy) {
            for (int dir : {1, -1}) collect(out, apply_aut(g, AutSpec::aut_t(copy, dir), ctx));
        }
        for (int tripod : {0, 1}) collect(out, apply_aut(g, AutSpec::holbar(tripod), ctx));
    }
    return out;
}

std::vector<Relation> lemma45_relations(const ReduceContext& ctx) {
    std::vector<Relation> out;
    for (const std::string g : {"H1", "H2", "H3", "H4"}) {
        for (int copy = 1; copy <= 2; ++copy) {
            for (int dir : {1, -1}) collect(out, apply_aut(g, AutSpec::aut_t(copy, dir), ctx));
        }
    }
    return out;
}

std::vector<Relation> noncyclic_relations(const ReduceContext& ctx) {
    std::vector<Relation> out;
    for (const std::string g : {"Y1", "Y2"}) {
        for (int copy = 0; copy <= 3; ++copy) collect(out, apply_aut(g, AutSpec::nu(copy), ctx));
        for (int tripod : {0, 1}) collect(out, apply_aut(g, AutSpec::holbar(tripod), ctx));
        for (int copy = 1; copy <= 3; ++copy) {
            collect(out, apply_aut(g, AutSpec::rho(Rational(1), copy), ctx));
            collect(out, apply_aut(g, AutSpec::mu(Rational(2), copy), ctx));
        }
    }
    for (const std::string g : {"X1", "X2"}) {
        for (int copy = 1; copy <= 2; ++copy) {
            collect(out, apply_aut(g, AutSpec::nu(copy), ctx));
            collect(out, apply_aut(g, AutSpec::rho(Rational(1), copy), ctx));
            collect(out, apply_aut(g, AutSpec::mu(Rational(2), copy), ctx));
        }
    }
    return out;
}

std::vector<std::array<Rational, 4>> lambda_constraint_samples(std::size_t count, std::uint64_t seed) {
    auto rng = seeded_rng(seed);
    std::vector<std::array<Rational, 4>> out;
    std::set<std::array<Rational, 4>> seen;
    int guard = 0;
    while (out.size() < count && ++guard < 200000) {
        const Rational a = small_rational(rng);
        const Rational b = small_rational(rng);
        const Rational c = small_rational(rng);
        // d^2 - c d + (a^2+b^2+c^2-ab-1) = 0
        const Rational disc = c * c - 4 * (a * a + b * b + c * c - a * b - 1);
        Rational s;
        if (!rational_sqrt(disc, s)) continue;
        const Rational d = (c + s) / 2;
        std::array<Rational, 4> tuple{a, b, c, d};
        if (seen.insert(tuple).second) out.push_back(tuple);
    }
    if (out.size() < count) throw std::logic_error("constraint sampling failed to converge");
    return out;
}

std::vector<std::pair<Rational, Rational>> chi_constraint_samples(std::size_t count) {
    std::vector<std::pair<Rational, Rational>> out;
    out.emplace_back(1, 0);
    out.emplace_back(0, 1);
    out.emplace_back(1, 1);
    out.emplace_back(-1, -1);
    for (int m = 2; out.size() < count; ++m) {
        const Rational q(m * m - m + 1);
        out.emplace_back(Rational(m * m - 1) / q, Rational(m * (m - 2)) / q);
    }
    out.resize(count);
    return out;
}

} // namespace jdr
