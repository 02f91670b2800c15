#include "jdr/diagram.hpp"

#include "jdr/errors.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>

namespace jdr {

namespace {

std::string leg_to_string(const Leg& l) {
    std::ostringstream out;
    if (l.letter == BasisLetter::Eta) {
        out << "(e," << int(l.copy) << ')';
    } else {
        out << '(' << l.exp << ',' << int(l.copy) << ')';
    }
    return out.str();
}

} // namespace

std::string GenKey::to_string() const {
    std::ostringstream out;
    switch (kind) {
    case Kind::YY:
        out << "YY[";
        for (int i = 0; i < 6; ++i) {
            if (i == 3) out << ';';
            else if (i > 0) out << ',';
            out << leg_to_string(legs[i]);
        }
        out << ']';
        break;
    case Kind::H:
        out << "H[";
        for (int i = 0; i < 4; ++i) {
            if (i == 2) out << '|';
            else if (i > 0) out << ',';
            out << leg_to_string(legs[i]);
        }
        out << ']';
        break;
    case Kind::Ladder:
        out << "ladder[" << leg_to_string(legs[0]) << ',' << leg_to_string(legs[1]) << ']';
        break;
    case Kind::LoopStem:
        out << "loopstem[t^" << loop_exp << ';' << leg_to_string(legs[0]) << ',' << leg_to_string(legs[1]) << ']';
        break;
    case Kind::Lollipop:
        out << "lollipop[t^" << loop_exp << ';' << leg_to_string(legs[0]) << '|' << leg_to_string(legs[1]) << ','
            << leg_to_string(legs[2]) << ',' << leg_to_string(legs[3]) << ']';
        break;
    case Kind::Closed:
        out << "closed[]";
        break;
    }
    return out.str();
}

GenKey yy_key(const std::array<Leg, 6>& legs) {
    return GenKey{GenKey::Kind::YY, std::vector<Leg>(legs.begin(), legs.end()), 0};
}

GenKey h_key(const std::array<Leg, 4>& legs) {
    return GenKey{GenKey::Kind::H, std::vector<Leg>(legs.begin(), legs.end()), 0};
}

namespace {

const std::array<std::array<int, 3>, 6> kPerm3 = {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
const std::array<int, 6> kPerm3Sign = {1, -1, -1, 1, 1, -1};

std::vector<std::vector<int>> copy_perms(int copies) {
    std::vector<int> ids(copies);
    for (int i = 0; i < copies; ++i) ids[i] = i + 1;
    std::vector<std::vector<int>> out;
    std::sort(ids.begin(), ids.end());
    do {
        out.push_back(ids);
    } while (std::next_permutation(ids.begin(), ids.end()));
    return out;
}

Leg apply_copy_perm(const Leg& l, const std::vector<int>& sigma) {
    Leg out = l;
    int idx = l.copy - 1;
    if (idx >= 0 && idx < static_cast<int>(sigma.size())) out.copy = static_cast<std::int8_t>(sigma[idx]);
    return out;
}

// Visits every element of the AS/Aut_xi orbit with its relative sign.
template <typename Fn>
void visit_orbit(const GenKey& key, int copies, Fn&& visit) {
    const auto sigmas = copy_perms(copies);
    if (key.kind == GenKey::Kind::YY) {
        for (std::size_t pa = 0; pa < kPerm3.size(); ++pa) {
            for (std::size_t pb = 0; pb < kPerm3.size(); ++pb) {
                for (int swap = 0; swap < 2; ++swap) {
                    std::array<Leg, 6> legs;
                    for (int i = 0; i < 3; ++i) legs[i] = key.legs[kPerm3[pa][i]];
                    for (int i = 0; i < 3; ++i) legs[3 + i] = key.legs[3 + kPerm3[pb][i]];
                    if (swap) std::rotate(legs.begin(), legs.begin() + 3, legs.end());
                    const int sign = kPerm3Sign[pa] * kPerm3Sign[pb];
                    for (const auto& sigma : sigmas) {
                        GenKey out = key;
                        out.legs.assign(legs.begin(), legs.end());
                        for (auto& l : out.legs) l = apply_copy_perm(l, sigma);
                        visit(out, sign);
                    }
                }
            }
        }
        return;
    }
    if (key.kind == GenKey::Kind::H) {
        for (int sl = 0; sl < 2; ++sl) {
            for (int sr = 0; sr < 2; ++sr) {
                for (int flip = 0; flip < 2; ++flip) {
                    std::array<Leg, 4> legs = {key.legs[0], key.legs[1], key.legs[2], key.legs[3]};
                    int sign = 1;
                    if (sl) { std::swap(legs[0], legs[1]); sign = -sign; }
                    if (sr) { std::swap(legs[2], legs[3]); sign = -sign; }
                    if (flip) std::reverse(legs.begin(), legs.end()); // vertex swap, sign +1
                    for (const auto& sigma : sigmas) {
                        GenKey out = key;
                        out.legs.assign(legs.begin(), legs.end());
                        for (auto& l : out.legs) l = apply_copy_perm(l, sigma);
                        visit(out, sign);
                    }
                }
            }
        }
        return;
    }
    visit(key, 1);
}

Canonical canonicalize_token(const GenKey& key, int copies) {
    const auto sigmas = copy_perms(copies);
    std::optional<GenKey> best;
    int best_sign = 1;
    auto consider = [&](const GenKey& k, int sign) {
        if (!best || k < *best) {
            best = k;
            best_sign = sign;
        }
    };
    switch (key.kind) {
    case GenKey::Kind::Ladder: {
        for (const auto& sigma : sigmas) {
            GenKey k = key;
            for (auto& l : k.legs) l = apply_copy_perm(l, sigma);
            std::sort(k.legs.begin(), k.legs.end()); // leg swap carries sign +1
            const int shift = std::min(k.legs[0].exp, k.legs[1].exp);
            for (auto& l : k.legs) l.exp -= shift;
            consider(k, 1);
        }
        break;
    }
    case GenKey::Kind::LoopStem: {
        if (key.loop_exp == 0) return Canonical{key, 0};
        for (const auto& sigma : sigmas) {
            GenKey k = key;
            for (auto& l : k.legs) l = apply_copy_perm(l, sigma);
            int sign = 1;
            if (k.loop_exp < 0) { k.loop_exp = -k.loop_exp; sign = -sign; }
            if (k.legs[1] < k.legs[0]) { std::swap(k.legs[0], k.legs[1]); sign = -sign; }
            if (k.legs[0] == k.legs[1]) return Canonical{key, 0};
            consider(k, sign);
        }
        break;
    }
    case GenKey::Kind::Lollipop: {
        if (key.loop_exp == 0) return Canonical{key, 0};
        for (const auto& sigma : sigmas) {
            GenKey k = key;
            for (auto& l : k.legs) l = apply_copy_perm(l, sigma);
            int sign = 1;
            if (k.loop_exp < 0) { k.loop_exp = -k.loop_exp; sign = -sign; }
            // Sort the tripod legs (entries 1..3), tracking the permutation sign.
            for (int i = 1; i < 4; ++i) {
                for (int j = i + 1; j < 4; ++j) {
                    if (k.legs[j] < k.legs[i]) { std::swap(k.legs[i], k.legs[j]); sign = -sign; }
                }
            }
            if (k.legs[1] == k.legs[2] || k.legs[2] == k.legs[3]) return Canonical{key, 0};
            consider(k, sign);
        }
        break;
    }
    default:
        return Canonical{key, 1};
    }
    return Canonical{*best, best_sign};
}

// Aut_xi always ranges over the three ambient copies; permutations moving an
// absent copy act trivially on the tuple.
constexpr int kAmbientCopies = 3;

} // namespace

Canonical canonicalize(const GenKey& key, const EssentialRegistry* registry) {
    const int copies = kAmbientCopies;
    if (key.kind != GenKey::Kind::YY && key.kind != GenKey::Kind::H) {
        return canonicalize_token(key, copies);
    }
    std::optional<GenKey> least;
    int least_sign = 1;
    bool trivial = false;
    std::map<GenKey, int> seen;
    visit_orbit(key, copies, [&](const GenKey& k, int sign) {
        auto [it, inserted] = seen.emplace(k, sign);
        if (!inserted && it->second != sign) trivial = true;
        if (!least || k < *least) {
            least = k;
            least_sign = sign;
        }
    });
    if (trivial) return Canonical{key, 0};
    if (registry) {
        if (auto hit = registry->match(key)) return Canonical{hit->first, hit->second};
    }
    // least = least_sign * key, so key = least_sign * least.
    return Canonical{*least, least_sign};
}

void EssentialRegistry::add(const std::string& name, const GenKey& seed) {
    seeds_[name] = seed;
    seed_names_[seed] = name;
    order_.push_back(name);
    const int copies = kAmbientCopies;
    std::optional<GenKey> least;
    int least_sign = 1;
    visit_orbit(seed, copies, [&](const GenKey& k, int sign) {
        if (!least || k < *least) {
            least = k;
            least_sign = sign;
        }
    });
    // least = least_sign * seed.
    auto [it, inserted] = least_index_.emplace(*least, std::make_pair(name, least_sign));
    if (!inserted && it->second.first != name) {
        throw std::logic_error("essential registry collision: " + name + " vs " + it->second.first);
    }
}

std::optional<std::pair<GenKey, int>> EssentialRegistry::match(const GenKey& k) const {
    const int copies = kAmbientCopies;
    std::optional<GenKey> least;
    int least_sign = 1;
    visit_orbit(k, copies, [&](const GenKey& cand, int sign) {
        if (!least || cand < *least) {
            least = cand;
            least_sign = sign;
        }
    });
    auto it = least_index_.find(*least);
    if (it == least_index_.end()) return std::nullopt;
    // k = least_sign * least and form = form_sign * least, hence
    // k = least_sign * form_sign * form.
    const auto& [name, form_sign] = it->second;
    return std::make_pair(seeds_.at(name), least_sign * form_sign);
}

std::optional<std::pair<GenKey, int>> EssentialRegistry::match_shifted(const GenKey& k, int copies) const {
    // BFS over in-range Aut_t and Hol shifts (all sign +1).
    auto in_range = [](const Leg& l) { return l.exp == 0 || l.exp == 1; };
    std::set<GenKey> visited;
    std::deque<GenKey> queue{k};
    while (!queue.empty()) {
        GenKey cur = queue.front();
        queue.pop_front();
        if (!visited.insert(cur).second) continue;
        if (auto hit = match(cur)) return hit;
        auto push_shift = [&](const std::vector<int>& slots, int d) {
            GenKey next = cur;
            for (int s : slots) next.legs[s].exp += d;
            if (std::all_of(next.legs.begin(), next.legs.end(), in_range)) queue.push_back(next);
        };
        for (int c = 1; c <= copies; ++c) {
            std::vector<int> slots;
            for (int i = 0; i < static_cast<int>(cur.legs.size()); ++i) {
                if (cur.legs[i].copy == c) slots.push_back(i);
            }
            if (slots.empty()) continue;
            push_shift(slots, +1);
            push_shift(slots, -1);
        }
        if (cur.kind == GenKey::Kind::YY) {
            push_shift({0, 1, 2}, +1);
            push_shift({0, 1, 2}, -1);
            push_shift({3, 4, 5}, +1);
            push_shift({3, 4, 5}, -1);
        } else if (cur.kind == GenKey::Kind::H) {
            GenKey next = cur;
            next.legs[0].exp += 1;
            next.legs[1].exp += 1;
            next.legs[2].exp -= 1;
            next.legs[3].exp -= 1;
            if (std::all_of(next.legs.begin(), next.legs.end(), in_range)) queue.push_back(next);
            next = cur;
            next.legs[0].exp -= 1;
            next.legs[1].exp -= 1;
            next.legs[2].exp += 1;
            next.legs[3].exp += 1;
            if (std::all_of(next.legs.begin(), next.legs.end(), in_range)) queue.push_back(next);
        }
    }
    return std::nullopt;
}

std::optional<std::string> EssentialRegistry::name_of(const GenKey& seed) const {
    auto it = seed_names_.find(seed);
    if (it == seed_names_.end()) return std::nullopt;
    return it->second;
}

std::optional<GenKey> EssentialRegistry::seed_of(const std::string& name) const {
    auto it = seeds_.find(name);
    if (it == seeds_.end()) return std::nullopt;
    return it->second;
}

namespace {

GenKey yyk(std::initializer_list<Leg> legs) {
    return GenKey{GenKey::Kind::YY, std::vector<Leg>(legs), 0};
}

GenKey hk(std::initializer_list<Leg> legs) {
    return GenKey{GenKey::Kind::H, std::vector<Leg>(legs), 0};
}

void add_h_family(EssentialRegistry& reg) {
    reg.add("H1", hk({g(0, 1), g(0, 2), g(0, 1), g(0, 2)}));
    reg.add("H2", hk({g(0, 1), g(0, 2), g(0, 1), g(1, 2)}));
    reg.add("H3", hk({g(0, 1), g(0, 2), g(1, 1), g(1, 2)}));
    reg.add("H4", hk({g(0, 1), g(1, 2), g(1, 1), g(0, 2)}));
}

} // namespace

const EssentialRegistry& EssentialRegistry::cyclic2() {
    static const EssentialRegistry reg = [] {
        EssentialRegistry r;
        r.add("Gamma1", yyk({g(0, 1), g(0, 2), g(1, 2), g(0, 1), g(0, 2), g(1, 2)}));
        r.add("Gamma2", yyk({g(0, 1), g(0, 2), g(1, 2), g(1, 1), g(0, 2), g(1, 2)}));
        r.add("Gamma3", yyk({g(1, 1), g(0, 2), g(1, 2), g(1, 1), g(0, 2), g(1, 2)}));
        add_h_family(r);
        return r;
    }();
    return reg;
}

const EssentialRegistry& EssentialRegistry::cyclic3() {
    static const EssentialRegistry reg = [] {
        EssentialRegistry r;
        r.add("D1", yyk({g(0, 1), g(0, 2), g(1, 2), g(0, 1), g(0, 3), g(1, 3)}));
        r.add("D2", yyk({g(0, 1), g(0, 2), g(1, 2), g(1, 1), g(0, 3), g(1, 3)}));
        r.add("G1", yyk({g(0, 1), g(0, 2), g(0, 3), g(0, 1), g(0, 2), g(0, 3)}));
        r.add("G2", yyk({g(0, 1), g(0, 2), g(0, 3), g(0, 1), g(0, 2), g(1, 3)}));
        r.add("G3", yyk({g(0, 1), g(0, 2), g(1, 3), g(0, 1), g(1, 2), g(0, 3)}));
        r.add("G4", yyk({g(0, 1), g(0, 2), g(1, 3), g(1, 1), g(1, 2), g(0, 3)}));
        add_h_family(r);
        return r;
    }();
    return reg;
}

const EssentialRegistry& EssentialRegistry::noncyclic3() {
    static const EssentialRegistry reg = [] {
        EssentialRegistry r;
        r.add("Y1", yyk({g(0, 1), g(0, 2), e(0, 2), e(0, 1), g(0, 3), e(0, 3)}));
        r.add("Y2", yyk({g(0, 1), g(0, 2), g(0, 3), e(0, 1), e(0, 2), e(0, 3)}));
        r.add("X1", hk({g(0, 1), g(0, 2), e(0, 1), e(0, 2)}));
        r.add("X2", hk({g(0, 1), e(0, 2), e(0, 1), g(0, 2)}));
        return r;
    }();
    return reg;
}

LaurentPoly linking_numerator(const Leg& v, const Leg& w, const BlanchfieldSpec& spec) {
    if (v.copy != w.copy) return LaurentPoly();
    if (spec.is_cyclic()) {
        return LaurentPoly::monomial(v.exp - w.exp, ParamPoly::variable(Param::R));
    }
    // Non-cyclic labels are exponent-free; fold stray t-powers as t = -1.
    const ParamPoly sign((v.exp + w.exp) % 2 == 0 ? 1 : -1);
    if (v.letter == w.letter) return LaurentPoly();
    if (v.letter == BasisLetter::Gamma) return LaurentPoly::monomial(0, sign); // f(g,e) = 1/delta
    return LaurentPoly::monomial(1, sign);                                     // f(e,g) = t/delta
}

ParamPoly LinCombo::coeff(const GenKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? ParamPoly() : it->second;
}

void LinCombo::add(const GenKey& k, const ParamPoly& c, const CoeffCtx& ctx) {
    ParamPoly v = ctx.norm(c);
    if (v.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void LinCombo::add_scaled(const LinCombo& o, const ParamPoly& c, const CoeffCtx& ctx) {
    for (const auto& [k, v] : o.terms_) add(k, ctx.mul(v, c), ctx);
}

LinCombo& LinCombo::operator+=(const LinCombo& o) {
    CoeffCtx plain;
    for (const auto& [k, v] : o.terms_) add(k, v, plain);
    return *this;
}

LinCombo& LinCombo::operator-=(const LinCombo& o) {
    CoeffCtx plain;
    for (const auto& [k, v] : o.terms_) add(k, -v, plain);
    return *this;
}

LinCombo LinCombo::without_lower_order() const {
    LinCombo out;
    for (const auto& [k, v] : terms_) {
        if (!k.lower_order()) out.terms_.emplace(k, v);
    }
    return out;
}

bool LinCombo::has_only_lower_order() const {
    for (const auto& [k, v] : terms_) {
        if (!k.lower_order()) return false;
    }
    return true;
}

std::string LinCombo::to_string(const EssentialRegistry* reg) const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<std::string, const ParamPoly*>> parts;
    std::set<GenKey> printed;
    if (reg) {
        for (const auto& name : reg->print_order()) {
            auto seed = reg->seed_of(name);
            if (!seed) continue;
            auto it = terms_.find(*seed);
            if (it == terms_.end()) continue;
            parts.emplace_back(name, &it->second);
            printed.insert(*seed);
        }
    }
    for (const auto& [k, v] : terms_) {
        if (printed.count(k)) continue;
        parts.emplace_back(k.to_string(), &v);
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, coeff] : parts) {
        std::string cs = coeff->to_string();
        bool negated = false;
        if (coeff->terms().size() == 1 && cs.front() == '-') {
            negated = true;
            cs.erase(cs.begin());
        }
        if (first) {
            if (negated) out << '-';
            first = false;
        } else {
            out << (negated ? " - " : " + ");
        }
        if (coeff->terms().size() > 1) {
            out << '(' << cs << ")*" << name;
        } else if (cs == "1") {
            out << name;
        } else {
            out << cs << '*' << name;
        }
    }
    return out.str();
}

FormalLeg FormalLeg::scaled(const ParamPoly& c) const {
    FormalLeg out;
    for (const auto& [coeff, leg] : parts) {
        ParamPoly v = coeff * c;
        if (!v.is_zero()) out.parts.emplace_back(v, leg);
    }
    return out;
}

FormalLeg FormalLeg::shifted(int k) const {
    FormalLeg out = *this;
    for (auto& [coeff, leg] : out.parts) leg.exp += k;
    return out;
}

LaurentPoly GeneralDiagram::linking_of(int i, int j) const {
    assert(i < j);
    auto it = linking.find({i, j});
    return it == linking.end() ? LaurentPoly() : it->second;
}

void GeneralDiagram::set_linking(int i, int j, const LaurentPoly& num) {
    assert(i < j);
    if (num.is_zero()) linking.erase({i, j});
    else linking[{i, j}] = num;
}

GeneralDiagram admissible_diagram(GenKey::Kind kind, const std::vector<Leg>& legs,
                                  const BlanchfieldSpec& spec) {
    GeneralDiagram d;
    d.kind = kind;
    for (const auto& l : legs) d.legs.push_back(FormalLeg::monomial(l));
    const int n = d.leg_count();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) d.set_linking(i, j, linking_numerator(legs[i], legs[j], spec));
    }
    return d;
}

LaurentPoly convention_linking(const FormalLeg& a, const FormalLeg& b, const BlanchfieldSpec& spec) {
    LaurentPoly out;
    for (const auto& [ca, la] : a.parts) {
        for (const auto& [cb, lb] : b.parts) {
            LaurentPoly f = linking_numerator(la, lb, spec);
            if (f.is_zero()) continue;
            out += f * LaurentPoly(ca * cb);
        }
    }
    return out;
}

} // namespace jdr
