#ifndef JDR_DIAGRAM_HPP
#define JDR_DIAGRAM_HPP

#include "jdr/laurent.hpp"
#include "jdr/param_poly.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jdr {

// Basis letter of a leg label: gamma always exists; eta only in the
// non-cyclic case (order t+1 summands).
enum class BasisLetter : std::uint8_t { Gamma = 0, Eta = 1 };

// One leg: label t^exp * (gamma|eta)_copy.
struct Leg {
    std::int32_t exp = 0;
    std::int8_t copy = 1;
    BasisLetter letter = BasisLetter::Gamma;

    auto operator<=>(const Leg&) const = default;
};

inline Leg g(int exp, int copy) { return Leg{exp, static_cast<std::int8_t>(copy), BasisLetter::Gamma}; }
inline Leg e(int exp, int copy) { return Leg{exp, static_cast<std::int8_t>(copy), BasisLetter::Eta}; }

struct BlanchfieldSpec {
    AnnihilatorSpec annihilator;
    int copies = 2; // 1..3

    static BlanchfieldSpec cyclic(const AnnihilatorSpec& a, int copies) { return {a, copies}; }
    static BlanchfieldSpec noncyclic(int copies) { return {AnnihilatorSpec::noncyclic(), copies}; }
    bool is_cyclic() const { return annihilator.is_cyclic(); }
};

// Canonical generator key. YY diagrams are two disjoint tripods with legs in
// slots 1-3 (top, then counterclockwise) and 4-6; H diagrams carry slots
// (top-left, bottom-left, bottom-right, top-right), the left vertex joining
// slots 1,2 and the right vertex slots 3,4. The lower shapes are opaque
// tagged generators:
//   Ladder   - two trivalent vertices joined by a double edge, one leg each;
//   LoopStem - a loop at one vertex, two legs on the other;
//   Lollipop - (loop + one leg) disjoint union a tripod, loop label t^loop_exp;
//   Closed   - no legs.
struct GenKey {
    enum class Kind : std::uint8_t { YY = 0, H, Ladder, LoopStem, Lollipop, Closed };

    Kind kind = Kind::YY;
    std::vector<Leg> legs;
    std::int32_t loop_exp = 0;

    auto operator<=>(const GenKey&) const = default;

    bool lower_order() const { return kind != Kind::YY && kind != Kind::H; }
    std::string to_string() const;
};

GenKey yy_key(const std::array<Leg, 6>& legs);
GenKey h_key(const std::array<Leg, 4>& legs);

struct Canonical {
    GenKey key;
    int sign = 0; // 0 means the term vanishes by AS
};

class EssentialRegistry;

// AS / Aut_xi normal form. The group is: leg permutations within each tripod
// (sign of the permutation), the tripod swap for YY, the leg swap at each H
// vertex (sign -1 each), the H vertex swap, and global copy permutations.
// Exponent-shifting relations (Aut_t, Hol) are *not* identifications here;
// they are applied by the reducers. If the orbit meets a registered essential
// generator, that representative is returned, otherwise the lexicographic
// least orbit element.
Canonical canonicalize(const GenKey& key, const EssentialRegistry* registry = nullptr);

// Named essential generators for one ambient case.
class EssentialRegistry {
public:
    void add(const std::string& name, const GenKey& seed);

    // Orbit lookup: (seed key, sign with input = sign * seed) if the
    // AS/Aut_xi orbit of `k` meets a seed.
    std::optional<std::pair<GenKey, int>> match(const GenKey& k) const;
    // As above, but also closes under in-range Aut_t and Hol shifts, which
    // identify the alternate generator forms listed in the figures (all
    // sign-free). Used by the oplus-3 reducer.
    std::optional<std::pair<GenKey, int>> match_shifted(const GenKey& k, int copies) const;

    std::optional<std::string> name_of(const GenKey& seed) const;
    std::optional<GenKey> seed_of(const std::string& name) const;
    const std::vector<std::string>& print_order() const { return order_; }

    static const EssentialRegistry& cyclic2();
    static const EssentialRegistry& cyclic3();
    static const EssentialRegistry& noncyclic3();

private:
    std::map<GenKey, std::pair<std::string, int>> least_index_; // least rep -> (name, sign least->seed)
    std::map<GenKey, std::string> seed_names_;
    std::map<std::string, GenKey> seeds_;
    std::vector<std::string> order_;
};

// Prescribed linking of two monomial legs, as the numerator N of N/delta.
// Cyclic: r*t^{kv-kw} on equal copies, 0 otherwise. Non-cyclic:
// f(g,g)=f(e,e)=0, f(g,e)=1/delta, f(e,g)=t/delta on equal copies.
LaurentPoly linking_numerator(const Leg& v, const Leg& w, const BlanchfieldSpec& spec);

// Formal sum of canonical generators with ParamPoly coefficients.
class LinCombo {
public:
    using TermMap = std::map<GenKey, ParamPoly>;

    LinCombo() = default;

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    ParamPoly coeff(const GenKey& k) const;

    void add(const GenKey& k, const ParamPoly& c, const CoeffCtx& ctx);
    void add_scaled(const LinCombo& o, const ParamPoly& c, const CoeffCtx& ctx);
    LinCombo& operator+=(const LinCombo& o);
    LinCombo& operator-=(const LinCombo& o);
    friend LinCombo operator+(LinCombo l, const LinCombo& r) { return l += r; }
    friend LinCombo operator-(LinCombo l, const LinCombo& r) { return l -= r; }

    bool operator==(const LinCombo& o) const { return terms_ == o.terms_; }

    // Drops every lower-order (non YY/H) coordinate.
    LinCombo without_lower_order() const;
    bool has_only_lower_order() const;

    std::string to_string(const EssentialRegistry* reg = nullptr) const;

private:
    TermMap terms_;
};

// A leg carrying a formal Q_{a,b,c,d}[alpha,r]-combination of monomial labels.
struct FormalLeg {
    std::vector<std::pair<ParamPoly, Leg>> parts;

    static FormalLeg monomial(const Leg& l) { return FormalLeg{{{ParamPoly(1), l}}}; }
    FormalLeg scaled(const ParamPoly& c) const;
    FormalLeg shifted(int k) const; // multiply the label by t^k
    bool is_zero() const { return parts.empty(); }
};

// A YY/H-shaped diagram whose legs are formal combinations and whose pairwise
// linkings are explicit (numerators over delta). This is the input form for
// the omega-reduction.
struct GeneralDiagram {
    GenKey::Kind kind = GenKey::Kind::YY;
    std::vector<FormalLeg> legs;
    std::map<std::pair<int, int>, LaurentPoly> linking; // i<j, numerator over delta
    ParamPoly coeff = ParamPoly(1);

    int leg_count() const { return static_cast<int>(legs.size()); }
    LaurentPoly linking_of(int i, int j) const;
    void set_linking(int i, int j, const LaurentPoly& num);
};

// Builds the admissible diagram with convention linkings from monomial legs.
GeneralDiagram admissible_diagram(GenKey::Kind kind, const std::vector<Leg>& legs,
                                  const BlanchfieldSpec& spec);

// Convention linking numerator of two formal legs (bilinear extension).
LaurentPoly convention_linking(const FormalLeg& a, const FormalLeg& b, const BlanchfieldSpec& spec);

} // namespace jdr

#endif
