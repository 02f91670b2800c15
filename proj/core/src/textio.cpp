#include "jdr/textio.hpp"

#include "jdr/errors.hpp"

#include <cctype>
#include <optional>

namespace jdr {

namespace {

// Expression values: a Laurent scalar or a formal combination of generators
// with scalar coefficients.
struct Value {
    LaurentPoly scalar;
    LinCombo combo;
    bool is_combo = false;
};

class Parser {
public:
    Parser(const std::string& text, const EssentialRegistry* registry)
        : text_(text), registry_(registry) {}

    Value parse() {
        Value v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return v;
    }

private:
    const std::string& text_;
    const EssentialRegistry* registry_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    long long integer() {
        skip_ws();
        bool neg = eat('-');
        if (!neg) eat('+');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected integer");
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return neg ? -v : v;
    }

    std::string ident() {
        skip_ws();
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            out.push_back(text_[pos_]);
            ++pos_;
        }
        return out;
    }

    Leg leg() {
        expect('(');
        skip_ws();
        Leg l;
        if (peek() == 'g' || peek() == 'e') {
            l.letter = text_[pos_] == 'e' ? BasisLetter::Eta : BasisLetter::Gamma;
            ++pos_;
            l.exp = 0;
        } else {
            l.exp = static_cast<std::int32_t>(integer());
            l.letter = BasisLetter::Gamma;
        }
        expect(',');
        l.copy = static_cast<std::int8_t>(integer());
        if (l.copy < 1 || l.copy > 3) fail("copy index out of range");
        expect(')');
        return l;
    }

    int loop_label() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == 't') {
            ++pos_;
            expect('^');
            return static_cast<int>(integer());
        }
        fail("expected loop label t^k");
    }

    std::optional<Value> diagram_or_name(const std::string& name) {
        GenKey key;
        if (name == "YY") {
            key.kind = GenKey::Kind::YY;
            expect('[');
            for (int i = 0; i < 6; ++i) {
                if (i == 3) expect(';');
                else if (i > 0) expect(',');
                key.legs.push_back(leg());
            }
            expect(']');
        } else if (name == "H") {
            key.kind = GenKey::Kind::H;
            expect('[');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect('|');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect(']');
        } else if (name == "ladder") {
            key.kind = GenKey::Kind::Ladder;
            expect('[');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect(']');
        } else if (name == "loopstem") {
            key.kind = GenKey::Kind::LoopStem;
            expect('[');
            key.loop_exp = loop_label();
            expect(';');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect(']');
        } else if (name == "lollipop") {
            key.kind = GenKey::Kind::Lollipop;
            expect('[');
            key.loop_exp = loop_label();
            expect(';');
            key.legs.push_back(leg());
            expect('|');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect(',');
            key.legs.push_back(leg());
            expect(']');
        } else if (name == "closed") {
            key.kind = GenKey::Kind::Closed;
            expect('[');
            expect(']');
        } else if (registry_) {
            auto seed = registry_->seed_of(name);
            if (!seed) return std::nullopt;
            key = *seed;
        } else {
            return std::nullopt;
        }
        Value v;
        v.is_combo = true;
        CoeffCtx plain;
        v.combo.add(key, ParamPoly(1), plain);
        return v;
    }

    Value primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (eat('(')) {
            Value v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long num = integer();
            long long den = 1;
            if (eat('/')) den = integer();
            Value v;
            v.scalar = LaurentPoly(ParamPoly(Rational(num, den)));
            return v;
        }
        std::string name = ident();
        if (name.empty()) fail("expected value");
        if (name == "t") {
            Value v;
            v.scalar = LaurentPoly::t_power(1);
            return v;
        }
        static const std::map<std::string, Param> kVars = {{"alpha", Param::Alpha}, {"a", Param::A},
                                                           {"b", Param::B},         {"c", Param::C},
                                                           {"d", Param::D},         {"r", Param::R}};
        auto var = kVars.find(name);
        if (var != kVars.end()) {
            Value v;
            v.scalar = LaurentPoly(ParamPoly::variable(var->second));
            return v;
        }
        auto dia = diagram_or_name(name);
        if (!dia) fail("unknown name '" + name + "'");
        return *dia;
    }

    Value factor() {
        Value v = primary();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            ++pos_;
            long long e = integer();
            if (v.is_combo) fail("cannot exponentiate a diagram");
            if (e < 0) {
                // only pure powers of t may carry negative exponents
                if (v.scalar.terms().size() != 1 || !(v.scalar.coeff(1) == ParamPoly(1)) ||
                    v.scalar.min_exp() != 1) {
                    fail("negative exponent on a non-t factor");
                }
                v.scalar = LaurentPoly::t_power(static_cast<int>(e));
                return v;
            }
            LaurentPoly out(ParamPoly(1));
            for (long long i = 0; i < e; ++i) out = out * v.scalar;
            v.scalar = out;
        }
        return v;
    }

    static ParamPoly scalar_to_param(const LaurentPoly& s) {
        if (s.is_zero()) return ParamPoly();
        if (s.min_exp() != 0 || s.max_exp() != 0) {
            throw ParseError("t-powers cannot multiply diagram generators");
        }
        return s.coeff(0);
    }

    Value term() {
        Value v = factor();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                Value rhs = factor();
                if (v.is_combo && rhs.is_combo) fail("cannot multiply two diagrams");
                if (!v.is_combo && !rhs.is_combo) {
                    v.scalar = v.scalar * rhs.scalar;
                } else {
                    const LinCombo& combo = v.is_combo ? v.combo : rhs.combo;
                    ParamPoly scale = scalar_to_param(v.is_combo ? rhs.scalar : v.scalar);
                    Value out;
                    out.is_combo = true;
                    CoeffCtx plain;
                    out.combo.add_scaled(combo, scale, plain);
                    v = out;
                }
            } else {
                break;
            }
        }
        return v;
    }

    Value expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            ++pos_;
            neg = true;
        } else if (peek() == '+') {
            ++pos_;
        }
        Value v = term();
        if (neg) negate(v);
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) break;
            const char c = text_[pos_];
            if (c != '+' && c != '-') break;
            ++pos_;
            Value rhs = term();
            if (c == '-') negate(rhs);
            add_into(v, rhs);
        }
        return v;
    }

    static void negate(Value& v) {
        if (v.is_combo) {
            LinCombo out;
            CoeffCtx plain;
            out.add_scaled(v.combo, ParamPoly(-1), plain);
            v.combo = out;
        } else {
            v.scalar = -v.scalar;
        }
    }

    void add_into(Value& v, const Value& rhs) {
        if (v.is_combo != rhs.is_combo) fail("cannot add a scalar to a diagram combination");
        if (v.is_combo) v.combo += rhs.combo;
        else v.scalar += rhs.scalar;
    }
};

} // namespace

ParamPoly parse_param_poly(const std::string& text) {
    Parser p(text, nullptr);
    Value v = p.parse();
    if (v.is_combo) throw ParseError("expected a polynomial, found diagrams: " + text);
    if (v.scalar.is_zero()) return ParamPoly();
    if (v.scalar.min_exp() != 0 || v.scalar.max_exp() != 0) {
        throw ParseError("expected a t-free polynomial: " + text);
    }
    return v.scalar.coeff(0);
}

LaurentPoly parse_laurent(const std::string& text) {
    Parser p(text, nullptr);
    Value v = p.parse();
    if (v.is_combo) throw ParseError("expected a Laurent polynomial, found diagrams: " + text);
    return v.scalar;
}

LinCombo parse_lincombo(const std::string& text, const EssentialRegistry* registry) {
    Parser p(text, registry);
    Value v = p.parse();
    if (!v.is_combo) {
        if (v.scalar.is_zero()) return LinCombo();
        throw ParseError("expected a diagram combination: " + text);
    }
    return v.combo;
}

} // namespace jdr
