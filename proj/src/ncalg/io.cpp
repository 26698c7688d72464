#include "ncalg/io.hpp"
#include "ncalg/leading.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ncalg {

namespace {

std::string twist_text(int s) {
    if (s == 0) return "e";
    if (s == 1) return "s(e)";
    if (s == 2) return "D(e)";
    return "s^" + std::to_string(s) + "(e)";
}

std::string base_text(const Atom& a) {
    switch (a.base) {
        case Base::E: return twist_text(a.twist);
        case Base::K: return a.kexp == 1 ? "k" : "k^" + std::to_string(a.kexp);
        case Base::Lead: return "F[" + std::to_string(a.side) + "]";
    }
    return "?";
}

std::string atom_text(const Atom& a) {
    std::string s = base_text(a);
    for (int j = 0; j < a.d2; ++j) s = "d2(" + s + ")";
    for (int j = 0; j < a.d1; ++j) s = "d1(" + s + ")";
    return s;
}

bool neg_real(const Gauss& g) { return g.im.is_zero() && g.re < Rational(0); }
bool neg_imag(const Gauss& g) { return g.re.is_zero() && g.im < Rational(0); }

std::string gauss_text(const Gauss& g) {
    if (g.im.is_zero()) return g.re.str();
    std::string im = g.im == Rational(1) ? "i" : g.im == Rational(-1) ? "-i" : g.im.str() + " i";
    if (g.re.is_zero()) return im;
    std::string sign = g.im < Rational(0) ? " - " : " + ";
    Rational a = g.im < Rational(0) ? -g.im : g.im;
    std::string mag = a == Rational(1) ? "i" : a.str() + " i";
    return "(" + g.re.str() + sign + mag + ")";
}

std::string latex_rational(const Rational& r, bool unit_empty) {
    if (unit_empty && r == Rational(1)) return "";
    if (r.den() == 1) return std::to_string(r.num());
    return "\\frac{" + std::to_string(r.num()) + "}{" + std::to_string(r.den()) + "}";
}

std::string latex_gauss(const Gauss& g) {
    if (g.im.is_zero()) return latex_rational(g.re, true);
    if (g.re.is_zero()) return latex_rational(g.im, true) + "i";
    std::string im = g.im < Rational(0) ? "-" + latex_rational(-g.im, true) + "i" : "+" + latex_rational(g.im, true) + "i";
    return "\\left(" + latex_rational(g.re, false) + im + "\\right)";
}

std::string latex_base(const Atom& a) {
    switch (a.base) {
        case Base::E:
            if (a.twist == 0) return "e";
            if (a.twist == 1) return "\\sigma(e)";
            if (a.twist == 2) return "\\Delta(e)";
            return "\\sigma^{" + std::to_string(a.twist) + "}(e)";
        case Base::K:
            if (a.kexp == 1) return "k";
            if (a.kexp >= 0 && a.kexp < 10) return "k^" + std::to_string(a.kexp);
            return "k^{" + std::to_string(a.kexp) + "}";
        case Base::Lead: return to_latex(leading_factor(a.side));
    }
    return "?";
}

std::string latex_atom(const Atom& a) {
    std::string d;
    if (a.d1 == 1) d += "\\delta_1";
    else if (a.d1 > 1) d += "\\delta_1^" + std::to_string(a.d1);
    if (a.d2 == 1) d += "\\delta_2";
    else if (a.d2 > 1) d += "\\delta_2^" + std::to_string(a.d2);
    if (d.empty()) return latex_base(a);
    std::string s = d + "(" + latex_base(a) + ")";
    if (a.d1 && a.d2) s = "\\left(" + s + "\\right)";
    return s;
}

}  // namespace

std::string to_text(const Coefficient& c) {
    std::string s = gauss_text(c.val);
    if (c.pi_pow != 0) s += c.pi_pow == 1 ? " pi" : " pi^" + std::to_string(c.pi_pow);
    return s;
}

std::string to_text(const Word& w) {
    std::string s;
    for (const auto& x : w.f) {
        if (!s.empty()) s += " ";
        if (auto* a = std::get_if<Atom>(&x)) s += atom_text(*a);
        else if (auto* d = std::get_if<DmNode>(&x)) s += "Dm[" + std::to_string(d->m) + "](" + to_text(*d->arg) + ")";
        else {
            const auto& b = std::get<B0Node>(x);
            s += std::string(b.lam_m1 ? "b0[" : "b0l[") + std::to_string(b.side) + "," + std::to_string(b.power) + "," +
                 std::to_string(b.fpow) + "]";
        }
    }
    return s.empty() ? "1" : s;
}

std::string to_text(const Expr& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : a.term_list()) {
        Coefficient c = t.coef;
        bool neg = neg_real(c.val) || neg_imag(c.val);
        if (!first) out += neg ? " - " : " + ";
        else if (neg) out += "-";
        if (neg) c = -c;
        const bool unit = c.val == Gauss(Rational(1)) && c.pi_pow == 0;
        if (!unit) out += to_text(c);
        if (!t.word.empty()) out += unit ? to_text(t.word) : " * " + to_text(t.word);
        else if (unit) out += "1";
        first = false;
    }
    return out;
}

std::string to_latex(const Word& w) {
    std::string s;
    for (const auto& x : w.f) {
        if (auto* a = std::get_if<Atom>(&x)) s += latex_atom(*a);
        else if (auto* d = std::get_if<DmNode>(&x))
            s += "D_" + std::to_string(d->m) + "\\left(" + to_latex(*d->arg) + "\\right)";
        else {
            const auto& b = std::get<B0Node>(x);
            std::string p = b.power == 1 ? "b_0" : "b_0^" + std::to_string(b.power);
            std::string f;
            if (b.fpow > 0) {
                f = to_latex(leading_factor(b.side));
                if (b.fpow > 1) f = "(" + f + ")^" + std::to_string(b.fpow);
            }
            s += f.empty() ? p : "\\left(" + p + f + "\\right)";
        }
    }
    return s;
}

std::string to_latex(const Expr& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : a.term_list()) {
        Coefficient c = t.coef;
        bool neg = neg_real(c.val) || neg_imag(c.val);
        if (neg) c = -c;
        if (neg) out += "-";
        else if (!first) out += "+";
        std::string cs = latex_gauss(c.val);
        if (c.pi_pow == 1) cs += "\\pi";
        else if (c.pi_pow != 0) cs += "\\pi^{" + std::to_string(c.pi_pow) + "}";
        std::string ws = to_latex(t.word);
        if (ws.empty() && (cs.empty() || cs == "i")) cs = cs.empty() ? "1" : cs;
        // keep \pi from running into a following letter
        if (c.pi_pow == 1 && !ws.empty() && std::isalpha(static_cast<unsigned char>(ws[0]))) cs += " ";
        out += cs + ws;
        first = false;
    }
    return out;
}

nlohmann::json to_json(const Word& w) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : w.f) {
        if (auto* a = std::get_if<Atom>(&x)) {
            nlohmann::json j;
            switch (a->base) {
                case Base::E: j = {{"t", "E"}, {"twist", a->twist}}; break;
                case Base::K: j = {{"t", "K"}, {"n", a->kexp}}; break;
                case Base::Lead: j = {{"t", "Lead"}, {"side", a->side}}; break;
            }
            j["d"] = {a->d1, a->d2};
            arr.push_back(j);
        } else if (auto* d = std::get_if<DmNode>(&x)) {
            arr.push_back({{"t", "Dm"}, {"m", d->m}, {"arg", to_json(*d->arg)}});
        } else {
            const auto& b = std::get<B0Node>(x);
            arr.push_back({{"t", "B0"}, {"side", b.side}, {"power", b.power}, {"fpow", b.fpow}, {"lam_m1", b.lam_m1}});
        }
    }
    return arr;
}

nlohmann::json to_json(const Coefficient& c) {
    return {{"re_num", c.val.re.num()}, {"re_den", c.val.re.den()}, {"im_num", c.val.im.num()},
            {"im_den", c.val.im.den()}, {"pi_pow", c.pi_pow}};
}

nlohmann::json to_json(const Expr& a) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : a.term_list()) arr.push_back({{"word", to_json(t.word)}, {"coef", to_json(t.coef)}});
    return arr;
}

Word word_from_json(const nlohmann::json& j) {
    std::vector<Factor> f;
    for (const auto& x : j) {
        const std::string t = x.at("t");
        if (t == "Dm") {
            f.push_back(DmNode{x.at("m").get<int>(), std::make_shared<const Word>(word_from_json(x.at("arg")))});
        } else if (t == "B0") {
            f.push_back(B0Node{x.at("side").get<int>(), x.at("power").get<int>(), x.at("fpow").get<int>(),
                               x.at("lam_m1").get<bool>()});
        } else {
            Atom a;
            if (t == "E") { a.base = Base::E; a.twist = x.at("twist"); }
            else if (t == "K") { a.base = Base::K; a.kexp = x.at("n"); }
            else if (t == "Lead") { a.base = Base::Lead; a.side = x.at("side"); }
            else throw std::invalid_argument("unknown atom type '" + t + "'");
            a.d1 = x.at("d").at(0).get<int>();
            a.d2 = x.at("d").at(1).get<int>();
            f.push_back(a);
        }
    }
    return Word(std::move(f));
}

Expr expr_from_json(const nlohmann::json& j) {
    Expr r;
    for (const auto& t : j) {
        const auto& c = t.at("coef");
        Coefficient co(Gauss(Rational(c.at("re_num").get<std::int64_t>(), c.at("re_den").get<std::int64_t>()),
                             Rational(c.at("im_num").get<std::int64_t>(), c.at("im_den").get<std::int64_t>())),
                       c.at("pi_pow").get<int>());
        r.add_term(word_from_json(t.at("word")), co);
    }
    return r;
}

}  // namespace ncalg
