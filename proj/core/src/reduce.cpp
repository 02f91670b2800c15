#include "jdr/reduce.hpp"

#include "jdr/errors.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <sstream>

namespace jdr {

namespace {

ParamPoly r_poly() { return ParamPoly::variable(Param::R); }

bool in_range(const Leg& l) { return l.exp == 0 || l.exp == 1; }

std::array<int, 4> copy_counts(const std::vector<Leg>& legs) {
    std::array<int, 4> counts{};
    for (const auto& l : legs) counts[l.copy] += 1;
    return counts;
}

bool odd_copy_count(const std::vector<Leg>& legs) {
    auto counts = copy_counts(legs);
    for (int c = 1; c <= 3; ++c) {
        if (counts[c] % 2 != 0) return true;
    }
    return false;
}

// Folds t = -1 into the coefficient sign for non-cyclic labels.
int fold_noncyclic(std::vector<Leg>& legs) {
    int sign = 1;
    for (auto& l : legs) {
        if (l.exp % 2 != 0) sign = -sign;
        l.exp = 0;
    }
    return sign;
}

// gamma/eta imbalance in some copy makes the generator trivial (mu_x).
bool mu_trivial(const std::vector<Leg>& legs) {
    std::array<int, 4> balance{};
    for (const auto& l : legs) balance[l.copy] += l.letter == BasisLetter::Gamma ? 1 : -1;
    for (int c = 1; c <= 3; ++c) {
        if (balance[c] != 0) return true;
    }
    return false;
}

LinCombo reduce_h(const std::vector<Leg>& legs, const ReduceContext& ctx);
LinCombo reduce_yy(const std::vector<Leg>& legs, const ReduceContext& ctx);


// Remaining slots of a tripod in cyclic order after removing slot p.
std::array<int, 2> tripod_rest(int p) {
    const int base = p < 3 ? 0 : 3;
    const int i = p - base;
    return {base + (i + 1) % 3, base + (i + 2) % 3};
}

// Third slot of the tripod containing slots p and q.
int tripod_third(int p, int q) {
    const int base = p < 3 ? 0 : 3;
    return base + (3 - (p - base) - (q - base));
}

// --- contraction of one monomial edge label ---------------------------------
//
// Contracts legs vi, wi with connecting edge c*t^m, the label read vi -> wi.
// YY cross-tripod: the result is the H diagram whose left vertex keeps the
// first tripod's remaining legs (cyclic successor order) and whose right
// vertex keeps the second tripod's, the edge label pushed into the first
// side's legs as an exponent shift of -m. YY same-tripod: a lollipop, zero
// when the label is constant. H cross-vertex: the two-leg ladder with sign
// -1 (pair normalized to slots (0,2) by AS swaps). H same-vertex: loop-stem.
LinCombo contract_monomial(GenKey::Kind kind, const std::vector<Leg>& legs, int vi, int wi,
                           int m, const ParamPoly& c, const ReduceContext& ctx) {
    LinCombo out;
    const int push = ctx.mut.flip_push_side ? 1 : -1;
    if (kind == GenKey::Kind::YY) {
        if ((vi < 3) == (wi < 3)) {
            const int mm = vi < wi ? m : -m;
            if (mm == 0 || ctx.mode == Mode::Quotient) return out; // AS-trivial loop / lower order
            GenKey tok;
            tok.kind = GenKey::Kind::Lollipop;
            tok.loop_exp = mm;
            tok.legs = {legs[tripod_third(std::min(vi, wi), std::max(vi, wi))]};
            for (int i = 0; i < 6; ++i) {
                if ((i < 3) != (vi < 3)) tok.legs.push_back(legs[i]);
            }
            Canonical can = canonicalize(tok, ctx.registry);
            if (can.sign != 0) out.add(can.key, ParamPoly(can.sign) * c, ctx.coeff);
            return out;
        }
        const int p = vi < 3 ? vi : wi;
        const int q = vi < 3 ? wi : vi;
        const int mm = vi < 3 ? m : -m; // read first tripod -> second
        const auto ra = tripod_rest(p);
        const auto rb = tripod_rest(q);
        std::vector<Leg> h = {legs[ra[0]], legs[ra[1]], legs[rb[0]], legs[rb[1]]};
        h[0].exp += push * mm;
        h[1].exp += push * mm;
        out.add_scaled(reduce_h(h, ctx), c, ctx.coeff);
        return out;
    }
    assert(kind == GenKey::Kind::H);
    if ((vi < 2) == (wi < 2)) {
        if (ctx.mode == Mode::Quotient) return out;
        const int mm = vi < wi ? m : -m;
        GenKey tok;
        tok.kind = GenKey::Kind::LoopStem;
        tok.loop_exp = mm;
        tok.legs = vi < 2 ? std::vector<Leg>{legs[2], legs[3]} : std::vector<Leg>{legs[0], legs[1]};
        Canonical can = canonicalize(tok, ctx.registry);
        if (can.sign != 0) out.add(can.key, ParamPoly(can.sign) * c, ctx.coeff);
        return out;
    }
    if (ctx.mode == Mode::Quotient) return out;
    const int left = vi < 2 ? vi : wi;
    const int right = vi < 2 ? wi : vi;
    const int mm = vi < 2 ? m : -m; // read left -> right
    int sign = -1;                  // the (0,2)-contraction primitive carries -1
    if (left == 1) sign = -sign;
    if (right == 3) sign = -sign;
    GenKey tok;
    tok.kind = GenKey::Kind::Ladder;
    Leg la = legs[left == 0 ? 1 : 0];
    la.exp += push * mm;
    tok.legs = {la, legs[right == 2 ? 3 : 2]};
    Canonical can = canonicalize(tok, ctx.registry);
    if (can.sign != 0) out.add(can.key, ParamPoly(sign * can.sign) * c, ctx.coeff);
    return out;
}

LinCombo contract_edge(GenKey::Kind kind, const std::vector<Leg>& legs, int vi, int wi,
                       const LaurentPoly& edge, const ReduceContext& ctx) {
    LinCombo out;
    for (const auto& [m, coeff] : edge.terms()) out += contract_monomial(kind, legs, vi, wi, m, coeff, ctx);
    return out;
}

// --- exponent range reduction ------------------------------------------------

using ReduceFn = LinCombo (*)(const std::vector<Leg>&, const ReduceContext&);

// One step of D+ = -alpha*D - D- + sum_{v'} D_{vv'} at the lowest
// out-of-range leg; the pairings carry delta*f = r*t^{k_v-k_v'} computed in
// the base diagram.
std::optional<LinCombo> range_step(GenKey::Kind kind, const std::vector<Leg>& legs,
                                   const ReduceContext& ctx, ReduceFn reduce_fn) {
    int vi = -1;
    for (int i = 0; i < static_cast<int>(legs.size()); ++i) {
        if (!in_range(legs[i])) {
            vi = i;
            break;
        }
    }
    if (vi < 0) return std::nullopt;
    if (!ctx.spec.is_cyclic()) {
        throw NonCyclicMode("exponent reduction is a cyclic-case step; non-cyclic labels fold by t = -1");
    }
    const ParamPoly alpha = ctx.spec.annihilator.alpha_poly();
    const int dir = legs[vi].exp > 1 ? -1 : +1;
    std::vector<Leg> base = legs;
    base[vi].exp += dir;
    std::vector<Leg> far = legs;
    far[vi].exp += 2 * dir;

    LinCombo out;
    out.add_scaled(reduce_fn(base, ctx), -alpha, ctx.coeff);
    out -= reduce_fn(far, ctx);
    for (int wi = 0; wi < static_cast<int>(legs.size()); ++wi) {
        if (wi == vi || legs[wi].copy != legs[vi].copy) continue;
        LaurentPoly edge = LaurentPoly::monomial(base[vi].exp - base[wi].exp, r_poly());
        out += contract_edge(kind, base, vi, wi, edge, ctx);
    }
    return out;
}

// --- reduc4 --------------------------------------------------------------------

LinCombo reduc4_impl(const std::vector<Leg>& legs, const ReduceContext& ctx) {
    LinCombo out;
    if (odd_copy_count(legs)) return out;
    if (legs[0] == legs[1] || legs[2] == legs[3]) return out;
    if (auto stepped = range_step(GenKey::Kind::H, legs, ctx, +[](const std::vector<Leg>& l, const ReduceContext& c) {
            return reduc4_impl(l, c);
        })) {
        return *stepped;
    }
    // All legs in one copy: half the sum of the distributions over two
    // copies, which Aut_xi folds into three terms.
    if (legs[0].copy == legs[1].copy && legs[0].copy == legs[2].copy && legs[0].copy == legs[3].copy) {
        for (int partner : {1, 2, 3}) {
            std::vector<Leg> d = legs;
            for (int i = 0; i < 4; ++i) d[i].copy = static_cast<std::int8_t>(i == 0 || i == partner ? 1 : 2);
            out += reduc4_impl(d, ctx);
        }
        return out;
    }
    // Both legs of one copy on the left vertex: IHX.
    if (legs[0].copy == legs[1].copy) {
        out += reduc4_impl({legs[0], legs[2], legs[1], legs[3]}, ctx);
        out -= reduc4_impl({legs[0], legs[3], legs[1], legs[2]}, ctx);
        return out;
    }
    // Both legs of one copy at the top: AS.
    if (legs[0].copy == legs[3].copy) {
        const int as_sign = ctx.mut.flip_as_sign ? 1 : -1;
        out.add_scaled(reduc4_impl({legs[0], legs[1], legs[3], legs[2]}, ctx), ParamPoly(as_sign), ctx.coeff);
        return out;
    }
    // Copies pair opposite slots now; classify by S and the parities of
    // k1+k3 and k1+k2.
    assert(legs[0].copy == legs[2].copy && legs[1].copy == legs[3].copy);
    const int k0 = legs[0].exp, k1 = legs[1].exp, k2 = legs[2].exp, k3 = legs[3].exp;
    const int S = k0 + k1 + k2 + k3;
    const char* name = nullptr;
    if (S % 2 != 0) name = "H2";
    else if ((k0 + k2) % 2 == 0) name = "H1";
    else name = (k0 + k1) % 2 == 0 ? "H3" : "H4";
    out += ctx.unit(name);
    return out;
}

// --- non-cyclic 4-leg reduction --------------------------------------------------

LinCombo noncyclic_h(std::vector<Leg> legs, const ReduceContext& ctx) {
    LinCombo out;
    const int sign = fold_noncyclic(legs);
    if (mu_trivial(legs)) return out;
    if (legs[0] == legs[1] || legs[2] == legs[3]) return out;
    if (legs[0].copy == legs[1].copy) { // IHX
        LinCombo sub;
        sub += noncyclic_h({legs[0], legs[2], legs[1], legs[3]}, ctx);
        sub -= noncyclic_h({legs[0], legs[3], legs[1], legs[2]}, ctx);
        out.add_scaled(sub, ParamPoly(sign), ctx.coeff);
        return out;
    }
    if (legs[0].copy == legs[3].copy) { // AS
        const int as_sign = ctx.mut.flip_as_sign ? 1 : -1;
        out.add_scaled(noncyclic_h({legs[0], legs[1], legs[3], legs[2]}, ctx), ParamPoly(sign * as_sign),
                       ctx.coeff);
        return out;
    }
    GenKey key{GenKey::Kind::H, legs, 0};
    Canonical can = canonicalize(key, ctx.registry);
    if (can.sign == 0) return out;
    if (!ctx.registry || !ctx.registry->name_of(can.key)) {
        throw UnmatchedTerm("non-cyclic 4-leg term outside the essential set: " + key.to_string());
    }
    out.add(can.key, ParamPoly(sign * can.sign), ctx.coeff);
    return out;
}

LinCombo reduce_h(const std::vector<Leg>& legs, const ReduceContext& ctx) {
    assert(legs.size() == 4);
    if (!ctx.spec.is_cyclic()) return noncyclic_h(legs, ctx);
    return reduc4_impl(legs, ctx);
}

// --- reduc6 (two copies) ----------------------------------------------------------

bool yy_as_trivial(const std::vector<Leg>& legs) {
    return legs[0] == legs[1] || legs[1] == legs[2] || legs[2] == legs[0] || legs[3] == legs[4] ||
           legs[4] == legs[5] || legs[5] == legs[3];
}

LinCombo reduc6_impl(const std::vector<Leg>& legs, const ReduceContext& ctx) {
    LinCombo out;
    if (odd_copy_count(legs)) return out;
    if (yy_as_trivial(legs)) return out;
    if (auto stepped = range_step(GenKey::Kind::YY, legs, ctx, +[](const std::vector<Leg>& l, const ReduceContext& c) {
            return reduc6_impl(l, c);
        })) {
        return *stepped;
    }
    auto counts = copy_counts(legs);
    if (counts[1] == 4) { // Aut_xi copy swap
        std::vector<Leg> sw = legs;
        for (auto& l : sw) l.copy = static_cast<std::int8_t>(l.copy == 1 ? 2 : 1);
        return reduc6_impl(sw, ctx);
    }
    assert(counts[1] == 2 && counts[2] == 4);
    // Cyclic rotations bring each copy-1 leg to the top of its tripod.
    std::vector<Leg> t = legs;
    for (int tri = 0; tri < 2; ++tri) {
        const int base = 3 * tri;
        int at = -1;
        for (int i = 0; i < 3; ++i) {
            if (t[base + i].copy == 1) at = i;
        }
        assert(at >= 0);
        std::rotate(t.begin() + base, t.begin() + base + at, t.begin() + base + 3);
    }
    const int stat = t[2].exp + t[4].exp - t[1].exp - t[5].exp;
    assert(stat == 0 || stat == 2 || stat == -2);
    const int sign = stat == 0 ? 1 : -1;
    const char* name = (t[0].exp + t[3].exp) % 2 == 0 ? "Gamma1" : "Gamma2";
    out.add_scaled(ctx.unit(name), ParamPoly(sign), ctx.coeff);
    return out;
}

// --- YY over three copies ------------------------------------------------------------

LinCombo reduce_yy3_impl(const std::vector<Leg>& legs, const ReduceContext& ctx) {
    LinCombo out;
    if (odd_copy_count(legs)) return out;
    if (yy_as_trivial(legs)) return out;
    if (auto stepped = range_step(GenKey::Kind::YY, legs, ctx, +[](const std::vector<Leg>& l, const ReduceContext& c) {
            return reduce_yy3_impl(l, c);
        })) {
        return *stepped;
    }
    GenKey key{GenKey::Kind::YY, legs, 0};
    Canonical can = canonicalize(key, ctx.registry);
    if (can.sign == 0) return out;
    auto hit = ctx.registry->match_shifted(key, 3);
    if (!hit) throw UnmatchedTerm("YY term outside the oplus-3 essential set: " + key.to_string());
    out.add(hit->first, ParamPoly(hit->second), ctx.coeff);
    return out;
}

// --- non-cyclic YY --------------------------------------------------------------------

// A balanced all-split YY whose letter pattern misses Y1/Y2: rewrite through
// nu on the copy whose eta sits on the first tripod. The relation produces
// the Y2-pattern main term plus an LD correction.
LinCombo noncyclic_yy_substitute(const GenKey& key, const ReduceContext& ctx) {
    std::vector<Leg> legs = key.legs;
    auto eta_count = [&](int tri) {
        int n = 0;
        for (int i = 0; i < 3; ++i) {
            if (legs[3 * tri + i].letter == BasisLetter::Eta) ++n;
        }
        return n;
    };
    if (eta_count(0) == 2) std::rotate(legs.begin(), legs.begin() + 3, legs.end());
    assert(eta_count(0) == 1);
    int copy = -1;
    for (int i = 0; i < 3; ++i) {
        if (legs[i].letter == BasisLetter::Eta) copy = legs[i].copy;
    }
    assert(copy > 0);
    GeneralDiagram d;
    d.kind = GenKey::Kind::YY;
    for (const auto& l : legs) {
        Leg img = l;
        ParamPoly c(1);
        if (l.copy == copy) {
            if (l.letter == BasisLetter::Gamma) {
                img.letter = BasisLetter::Eta;
            } else {
                img.letter = BasisLetter::Gamma;
                c = ParamPoly(-1);
            }
        }
        d.legs.push_back(FormalLeg{{{c, img}}});
    }
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) d.set_linking(i, j, linking_numerator(legs[i], legs[j], ctx.spec));
    }
    return omega_reduce(d, ctx);
}

LinCombo noncyclic_yy(std::vector<Leg> legs, const ReduceContext& ctx) {
    LinCombo out;
    const int sign = fold_noncyclic(legs);
    if (mu_trivial(legs)) return out;
    if (yy_as_trivial(legs)) return out;
    GenKey key{GenKey::Kind::YY, legs, 0};
    Canonical can = canonicalize(key, ctx.registry);
    if (can.sign == 0) return out;
    if (ctx.registry->name_of(can.key)) {
        out.add(can.key, ParamPoly(sign * can.sign), ctx.coeff);
        return out;
    }
    auto counts = copy_counts(legs);
    if (counts[1] != 2 || counts[2] != 2 || counts[3] != 2) {
        throw UnmatchedTerm("non-distributed YY term in the non-cyclic case: " + key.to_string());
    }
    out.add_scaled(noncyclic_yy_substitute(can.key, ctx), ParamPoly(sign * can.sign), ctx.coeff);
    return out;
}

LinCombo reduce_yy(const std::vector<Leg>& legs, const ReduceContext& ctx) {
    assert(legs.size() == 6);
    if (!ctx.spec.is_cyclic()) return noncyclic_yy(legs, ctx);
    if (ctx.spec.copies >= 3) return reduce_yy3_impl(legs, ctx);
    return reduc6_impl(legs, ctx);
}

LinCombo reduce_token(const GenKey& key, const ReduceContext& ctx) {
    LinCombo out;
    if (ctx.mode == Mode::Quotient) return out;
    Canonical can = canonicalize(key, ctx.registry);
    if (can.sign != 0) out.add(can.key, ParamPoly(can.sign), ctx.coeff);
    return out;
}

// Coefficient-wise normal form; excess divisibility by delta only holds in
// the constraint quotient, so the difference must be normalized first.
LaurentPoly laurent_norm(const LaurentPoly& q, const CoeffCtx& ctx) {
    LaurentPoly out;
    for (const auto& [k, c] : q.terms()) out.add_term(k, ctx.norm(c));
    return out;
}

} // namespace

ReduceContext ReduceContext::cyclic2(const AnnihilatorSpec& a, Mode mode, bool lambda_constraint) {
    ReduceContext ctx;
    ctx.spec = BlanchfieldSpec::cyclic(a, 2);
    ctx.mode = mode;
    ctx.coeff.lambda_constraint = lambda_constraint;
    ctx.registry = &EssentialRegistry::cyclic2();
    return ctx;
}

ReduceContext ReduceContext::cyclic3(const AnnihilatorSpec& a, Mode mode) {
    ReduceContext ctx;
    ctx.spec = BlanchfieldSpec::cyclic(a, 3);
    ctx.mode = mode;
    ctx.registry = &EssentialRegistry::cyclic3();
    return ctx;
}

ReduceContext ReduceContext::noncyclic3(Mode mode) {
    ReduceContext ctx;
    ctx.spec = BlanchfieldSpec::noncyclic(3);
    ctx.mode = mode;
    ctx.registry = &EssentialRegistry::noncyclic3();
    return ctx;
}

LinCombo ReduceContext::unit(const std::string& name) const {
    auto seed = registry ? registry->seed_of(name) : std::nullopt;
    if (!seed) throw std::logic_error("unknown essential generator: " + name);
    LinCombo out;
    out.add(*seed, ParamPoly(1), coeff);
    return out;
}

LinCombo reduc4(const std::array<Leg, 4>& legs, const ReduceContext& ctx) {
    return reduce_h({legs.begin(), legs.end()}, ctx);
}

LinCombo reduc6(const std::array<Leg, 6>& legs, const ReduceContext& ctx) {
    if (!ctx.spec.is_cyclic()) return noncyclic_yy({legs.begin(), legs.end()}, ctx);
    return reduc6_impl({legs.begin(), legs.end()}, ctx);
}

LinCombo reduce_yy3(const std::array<Leg, 6>& legs, const ReduceContext& ctx) {
    return reduce_yy3_impl({legs.begin(), legs.end()}, ctx);
}

LinCombo reduce_key(const GenKey& key, const ReduceContext& ctx) {
    switch (key.kind) {
    case GenKey::Kind::YY:
        return reduce_yy(key.legs, ctx);
    case GenKey::Kind::H:
        return reduce_h(key.legs, ctx);
    default:
        return reduce_token(key, ctx);
    }
}

LinCombo reduce_combo(const LinCombo& c, const ReduceContext& ctx) {
    LinCombo out;
    for (const auto& [key, coeff] : c.terms()) out.add_scaled(reduce_key(key, ctx), coeff, ctx.coeff);
    return out;
}

LinCombo pair_legs(GenKey::Kind kind, const std::vector<Leg>& legs, int vi, int wi,
                   const LaurentPoly& edge, const ReduceContext& ctx) {
    return contract_edge(kind, legs, vi, wi, edge, ctx);
}

LinCombo reduce_exponent(const GenKey& term, int leg_index, const ReduceContext& ctx) {
    if (!ctx.spec.is_cyclic()) {
        throw NonCyclicMode("reduce_exponent requires the cyclic annihilator; use t = -1 instead");
    }
    if (term.kind != GenKey::Kind::YY && term.kind != GenKey::Kind::H) {
        throw std::invalid_argument("reduce_exponent acts on YY or H generators");
    }
    if (leg_index < 0 || leg_index >= static_cast<int>(term.legs.size())) {
        throw std::invalid_argument("leg index out of range");
    }
    const std::vector<Leg>& legs = term.legs;
    if (in_range(legs[leg_index])) return reduce_key(term, ctx);
    const ParamPoly alpha = ctx.spec.annihilator.alpha_poly();
    const int dir = legs[leg_index].exp > 1 ? -1 : +1;
    std::vector<Leg> base = legs;
    base[leg_index].exp += dir;
    std::vector<Leg> far = legs;
    far[leg_index].exp += 2 * dir;
    LinCombo out;
    out.add_scaled(reduce_key(GenKey{term.kind, base, 0}, ctx), -alpha, ctx.coeff);
    out -= reduce_key(GenKey{term.kind, far, 0}, ctx);
    for (int wi = 0; wi < static_cast<int>(legs.size()); ++wi) {
        if (wi == leg_index || legs[wi].copy != legs[leg_index].copy) continue;
        LaurentPoly edge = LaurentPoly::monomial(base[leg_index].exp - base[wi].exp, r_poly());
        out += contract_edge(term.kind, base, leg_index, wi, edge, ctx);
    }
    return out;
}

LinCombo iota_expand(const std::array<Leg, 4>& legs, const ReduceContext& ctx) {
    for (const auto& l : legs) {
        if (l.copy != legs[0].copy) throw std::invalid_argument("iota_expand expects a one-copy generator");
    }
    if (!ctx.spec.is_cyclic()) throw NonCyclicMode("iota_expand is a cyclic-case operation");
    return reduce_h({legs.begin(), legs.end()}, ctx);
}

std::vector<std::vector<std::pair<int, int>>> psi2_pairings(int leg_count) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (leg_count % 2 != 0 || leg_count < 0) return out;
    std::vector<std::pair<int, int>> cur;
    std::function<void(std::vector<int>)> rec = [&](std::vector<int> rest) {
        if (rest.empty()) {
            out.push_back(cur);
            return;
        }
        const int first = rest.front();
        for (std::size_t j = 1; j < rest.size(); ++j) {
            std::vector<int> next;
            for (std::size_t k = 1; k < rest.size(); ++k) {
                if (k != j) next.push_back(rest[k]);
            }
            cur.emplace_back(first, rest[j]);
            rec(next);
            cur.pop_back();
        }
    };
    std::vector<int> items(leg_count);
    for (int i = 0; i < leg_count; ++i) items[i] = i;
    rec(items);
    return out;
}

std::vector<std::vector<std::pair<int, int>>> psi2_expand(const GenKey& key) {
    return psi2_pairings(static_cast<int>(key.legs.size()));
}

// --- omega reduction --------------------------------------------------------------

namespace {

// General-diagram contraction (formal legs, explicit linkings); mirrors
// contract_monomial, including the ladder sign and the exponent push on both
// labels and linkings (EV).
std::optional<GeneralDiagram> contract_general(const GeneralDiagram& d, int vi, int wi, int m,
                                               const ReduceContext& ctx) {
    const int push = ctx.mut.flip_push_side ? 1 : -1;
    GeneralDiagram out;
    out.coeff = d.coeff;
    std::vector<int> keep;
    std::vector<int> shifted;
    int mm = m;
    if (d.kind == GenKey::Kind::YY) {
        if ((vi < 3) == (wi < 3)) return std::nullopt;
        const int p = vi < 3 ? vi : wi;
        const int q = vi < 3 ? wi : vi;
        mm = vi < 3 ? m : -m;
        const auto ra = tripod_rest(p);
        const auto rb = tripod_rest(q);
        keep = {ra[0], ra[1], rb[0], rb[1]};
        shifted = {ra[0], ra[1]};
        out.kind = GenKey::Kind::H;
    } else if (d.kind == GenKey::Kind::H) {
        if ((vi < 2) == (wi < 2)) return std::nullopt;
        const int left = vi < 2 ? vi : wi;
        const int right = vi < 2 ? wi : vi;
        mm = vi < 2 ? m : -m;
        int sign = -1;
        if (left == 1) sign = -sign;
        if (right == 3) sign = -sign;
        keep = {left == 0 ? 1 : 0, right == 2 ? 3 : 2};
        shifted = {keep[0]};
        out.kind = GenKey::Kind::Ladder;
        if (sign < 0) out.coeff = -out.coeff;
    } else {
        return std::nullopt;
    }
    auto is_shifted = [&](int slot) {
        return std::find(shifted.begin(), shifted.end(), slot) != shifted.end();
    };
    for (int slot : keep) {
        FormalLeg leg = d.legs[slot];
        if (is_shifted(slot)) leg = leg.shifted(push * mm);
        out.legs.push_back(leg);
    }
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = a + 1; b < keep.size(); ++b) {
            const int i = keep[a], j = keep[b];
            LaurentPoly num = i < j ? d.linking_of(i, j) : laurent_bar(d.linking_of(j, i));
            int shift = 0;
            if (is_shifted(i)) shift += push * mm;
            if (is_shifted(j)) shift -= push * mm;
            out.set_linking(static_cast<int>(a), static_cast<int>(b), num.shifted(shift));
        }
    }
    return out;
}

// Lower-order result of a same-tripod / same-vertex contraction of a general
// diagram: expanded directly into tokens (full mode only).
LinCombo contract_general_lower(const GeneralDiagram& d, int vi, int wi, int m,
                                const ReduceContext& ctx, const ParamPoly& scale) {
    LinCombo out;
    if (ctx.mode == Mode::Quotient) return out;
    if (d.kind == GenKey::Kind::H) {
        const bool left_pair = vi < 2;
        const int mm = vi < wi ? m : -m;
        const FormalLeg& fa = d.legs[left_pair ? 2 : 0];
        const FormalLeg& fb = d.legs[left_pair ? 3 : 1];
        for (const auto& [ca, la] : fa.parts) {
            for (const auto& [cb, lb] : fb.parts) {
                GenKey tok;
                tok.kind = GenKey::Kind::LoopStem;
                tok.loop_exp = mm;
                tok.legs = {la, lb};
                Canonical can = canonicalize(tok, ctx.registry);
                if (can.sign != 0) out.add(can.key, ParamPoly(can.sign) * ca * cb * scale * d.coeff, ctx.coeff);
            }
        }
        return out;
    }
    assert(d.kind == GenKey::Kind::YY);
    const int mm = vi < wi ? m : -m;
    if (mm == 0) return out;
    const int p = std::min(vi, wi);
    std::vector<int> rest = {tripod_third(std::min(vi, wi), std::max(vi, wi))};
    for (int q2 = 0; q2 < 6; ++q2) {
        if ((q2 < 3) != (p < 3)) rest.push_back(q2);
    }
    std::vector<Leg> acc;
    std::function<void(std::size_t, const ParamPoly&)> walk = [&](std::size_t idx, const ParamPoly& cc) {
        if (idx == rest.size()) {
            GenKey tok;
            tok.kind = GenKey::Kind::Lollipop;
            tok.loop_exp = mm;
            tok.legs = acc;
            Canonical can = canonicalize(tok, ctx.registry);
            if (can.sign != 0) out.add(can.key, ParamPoly(can.sign) * cc, ctx.coeff);
            return;
        }
        for (const auto& [cl, ll] : d.legs[rest[idx]].parts) {
            acc.push_back(ll);
            walk(idx + 1, ctx.coeff.mul(cc, cl));
            acc.pop_back();
        }
    };
    walk(0, scale * d.coeff);
    return out;
}

// A ladder-level general object: expand the legs, then fix its one linking
// pair (corrections land in closed graphs).
LinCombo finalize_ladder(const GeneralDiagram& d, const ReduceContext& ctx) {
    LinCombo out;
    if (ctx.mode == Mode::Quotient) return out;
    assert(d.kind == GenKey::Kind::Ladder && d.legs.size() == 2);
    for (const auto& [c0, l0] : d.legs[0].parts) {
        for (const auto& [c1, l1] : d.legs[1].parts) {
            GenKey tok;
            tok.kind = GenKey::Kind::Ladder;
            tok.legs = {l0, l1};
            Canonical can = canonicalize(tok, ctx.registry);
            if (can.sign != 0) out.add(can.key, ParamPoly(can.sign) * c0 * c1 * d.coeff, ctx.coeff);
        }
    }
    if (!ctx.mut.drop_ld_corrections) {
        LaurentPoly conv = convention_linking(d.legs[0], d.legs[1], ctx.spec);
        LaurentPoly excess_num = laurent_norm(conv - d.linking_of(0, 1), ctx.coeff);
        if (!excess_num.is_zero()) {
            LaurentPoly excess = split_fraction(excess_num, LaurentPoly(), ctx.spec.annihilator);
            for (const auto& [m, c] : excess.terms()) {
                GenKey closed;
                closed.kind = GenKey::Kind::Closed;
                out.add(closed, -(c * d.coeff), ctx.coeff);
            }
        }
    }
    return out;
}

} // namespace

LinCombo omega_reduce(const GeneralDiagram& d, const ReduceContext& ctx) {
    LinCombo out;
    if (d.coeff.is_zero()) return out;
    if (d.kind == GenKey::Kind::Ladder) return finalize_ladder(d, ctx);

    for (int i = 0; i < d.leg_count(); ++i) {
        if (d.legs[i].is_zero()) return eliminate_zero_leg(d, i, ctx);
    }

    // LD corrections: D(prescribed) = D(convention) - sum of contractions of
    // the polynomial excesses.
    if (!ctx.mut.drop_ld_corrections) {
        for (int i = 0; i < d.leg_count(); ++i) {
            for (int j = i + 1; j < d.leg_count(); ++j) {
                LaurentPoly conv = convention_linking(d.legs[i], d.legs[j], ctx.spec);
                LaurentPoly excess_num = laurent_norm(conv - d.linking_of(i, j), ctx.coeff);
                if (excess_num.is_zero()) continue;
                LaurentPoly excess = split_fraction(excess_num, LaurentPoly(), ctx.spec.annihilator);
                for (const auto& [m, c] : excess.terms()) {
                    if (auto contracted = contract_general(d, i, j, m, ctx)) {
                        contracted->coeff = ctx.coeff.mul(contracted->coeff, c);
                        out.add_scaled(omega_reduce(*contracted, ctx), ParamPoly(-1), ctx.coeff);
                    } else {
                        out.add_scaled(contract_general_lower(d, i, j, m, ctx, c), ParamPoly(-1), ctx.coeff);
                    }
                }
            }
        }
    }

    LinCombo main = expand_and_reduce(d.kind, d.legs, ctx);
    out.add_scaled(main, d.coeff, ctx.coeff);
    return out;
}

namespace {

// Shared LV-expansion walk; `emit` consumes each monomial diagram.
void lv_walk(const std::vector<FormalLeg>& legs, const ReduceContext& ctx,
             const std::function<void(const std::vector<Leg>&, const ParamPoly&)>& emit) {
    std::vector<Leg> pick(legs.size());
    std::function<void(std::size_t, const ParamPoly&)> rec = [&](std::size_t i, const ParamPoly& c) {
        if (i == legs.size()) {
            emit(pick, c);
            return;
        }
        for (const auto& [coeff, leg] : legs[i].parts) {
            pick[i] = leg;
            rec(i + 1, ctx.coeff.mul(c, coeff));
        }
    };
    rec(0, ParamPoly(1));
}

} // namespace

LinCombo expand_and_reduce(GenKey::Kind kind, const std::vector<FormalLeg>& legs,
                           const ReduceContext& ctx) {
    LinCombo out;
    lv_walk(legs, ctx, [&](const std::vector<Leg>& pick, const ParamPoly& c) {
        LinCombo sub = kind == GenKey::Kind::YY ? reduce_yy(pick, ctx) : reduce_h(pick, ctx);
        out.add_scaled(sub, c, ctx.coeff);
    });
    return out;
}

LinCombo expand_multilinear(GenKey::Kind kind, const std::vector<FormalLeg>& legs,
                            const ReduceContext& ctx) {
    LinCombo out;
    lv_walk(legs, ctx, [&](const std::vector<Leg>& pick, const ParamPoly& c) {
        Canonical can = canonicalize(GenKey{kind, pick, 0}, ctx.registry);
        if (can.sign != 0) out.add(can.key, ctx.coeff.mul(ParamPoly(can.sign), c), ctx.coeff);
    });
    return out;
}

LinCombo eliminate_zero_leg(const GeneralDiagram& d, int vi, const ReduceContext& ctx) {
    LinCombo out;
    for (int wi = 0; wi < d.leg_count(); ++wi) {
        if (wi == vi) continue;
        LaurentPoly num = vi < wi ? d.linking_of(vi, wi) : laurent_bar(d.linking_of(wi, vi));
        if (num.is_zero()) continue;
        auto f = divide_by_delta(num, ctx.spec.annihilator);
        if (!f) throw NotPolynomialExcess("zero-leg linking is not a polynomial");
        for (const auto& [m, c] : f->terms()) {
            if (auto contracted = contract_general(d, vi, wi, m, ctx)) {
                contracted->coeff = ctx.coeff.mul(contracted->coeff, c);
                out += omega_reduce(*contracted, ctx);
            } else {
                out += contract_general_lower(d, vi, wi, m, ctx, c);
            }
        }
    }
    return out;
}

LinCombo eliminate_lollipop(const GenKey& lollipop, const ReduceContext& ctx) {
    assert(lollipop.kind == GenKey::Kind::Lollipop);
    if (ctx.spec.is_cyclic() && !ctx.spec.annihilator.alpha) {
        throw ConstraintViolated("lollipop elimination divides by delta(1); specialize alpha first");
    }
    const Rational d1 = ctx.spec.is_cyclic() ? Rational(*ctx.spec.annihilator.alpha + 2) : Rational(2);
    const Leg stem = lollipop.legs[0];
    const int push = ctx.mut.flip_push_side ? -1 : 1;
    LinCombo out;
    // (1/delta(1)) * zero-labelled stem; pairing it with each far-tripod leg
    // carries delta*f and the connecting label is pushed into the far legs.
    for (int wi = 1; wi <= 3; ++wi) {
        LaurentPoly num = linking_numerator(stem, lollipop.legs[wi], ctx.spec);
        if (num.is_zero()) continue;
        std::array<int, 2> rest{};
        int idx = 0;
        for (int k = 1; k <= 3; ++k) {
            if (k != wi) rest[idx++] = k;
        }
        for (const auto& [m, c] : num.terms()) {
            GenKey tok;
            tok.kind = GenKey::Kind::LoopStem;
            tok.loop_exp = lollipop.loop_exp;
            Leg la = lollipop.legs[rest[0]];
            Leg lb = lollipop.legs[rest[1]];
            la.exp += push * m;
            lb.exp += push * m;
            tok.legs = {la, lb};
            Canonical can = canonicalize(tok, ctx.registry);
            if (can.sign != 0) out.add(can.key, ParamPoly(Rational(can.sign) / d1) * c, ctx.coeff);
        }
    }
    return out;
}

} // namespace jdr
