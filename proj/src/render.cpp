#include "drh/render.hpp"

#include "drh/fourier.hpp"

#include <sstream>

namespace drh {

std::string to_plain(const Scalar& c) {
    if (c.is_real()) return rat_str(c.re);
    if (c.re == 0) {
        if (c.im == 1) return "i";
        if (c.im == -1) return "-i";
        return rat_str(c.im) + "*i";
    }
    std::string im = (c.im == 1) ? "i" : (c.im == -1) ? "-i" : rat_str(c.im) + "*i";
    if (!im.empty() && im[0] != '-') im = "+" + im;
    return "(" + rat_str(c.re) + im + ")";
}

static std::string jet_name(const JetVar& v, int dim) {
    std::string s = "u";
    if (dim > 1) s += std::to_string(v.color);
    if (v.order > 0) s += "_" + std::to_string(v.order);
    return s;
}

std::string to_plain(const Mono& m, int dim) {
    std::vector<std::string> parts;
    if (m.hpow > 0) parts.push_back(m.hpow == 1 ? "h" : "h^" + std::to_string(m.hpow));
    if (m.epow > 0) parts.push_back(m.epow == 1 ? "e" : "e^" + std::to_string(m.epow));
    for (const auto& jf : m.jets) {
        std::string s = jet_name(jf.var, dim);
        if (jf.power > 1) s += "^" + std::to_string(jf.power);
        parts.push_back(s);
    }
    if (parts.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "*";
        out += parts[i];
    }
    return out;
}

std::string to_plain(const DiffPoly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        std::string mono = to_plain(m, f.dim());
        bool negative = c.is_real() && c.re < 0;
        Scalar mag = negative ? -c : c;
        std::string cs = to_plain(mag);
        std::string body;
        if (mono == "1")
            body = cs;
        else if (cs == "1")
            body = mono;
        else
            body = cs + "*" + mono;
        if (first) {
            if (negative) os << "-";
            os << body;
            first = false;
        } else {
            os << (negative ? " - " : " + ") << body;
        }
    }
    return os.str();
}

std::string to_plain(const LocalFunctional& h) { return to_plain(h.density); }

std::string to_plain(const BSeries& b) {
    if (b.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : b.terms()) {
        bool negative = c.is_real() && c.re < 0;
        Scalar mag = negative ? -c : c;
        if (first) {
            if (negative) os << "-";
            first = false;
        } else {
            os << (negative ? " - " : " + ");
        }
        os << to_plain(mag);
        if (k.hpow > 0) os << "*h" << (k.hpow > 1 ? "^" + std::to_string(k.hpow) : "");
        if (k.epow > 0) os << "*e" << (k.epow > 1 ? "^" + std::to_string(k.epow) : "");
        for (const auto& f : k.factors) os << "*p" << f.color << "[" << f.expo << "]";
    }
    return os.str();
}

static std::string latex_rat(const Rational& r) {
    if (r.get_den() == 1) return r.get_str();
    std::string num = Rational(abs(r.get_num())).get_str();
    std::string s = (r < 0) ? "-" : "";
    return s + "\\frac{" + num + "}{" + r.get_den().get_str() + "}";
}

static std::string latex_scalar(const Scalar& c) {
    if (c.is_real()) return latex_rat(c.re);
    if (c.re == 0) return latex_rat(c.im) + "\\,i";
    return "\\left(" + latex_rat(c.re) + (c.im < 0 ? "" : "+") + latex_rat(c.im) + "\\,i\\right)";
}

static std::string latex_mono(const Mono& m, int dim) {
    std::ostringstream os;
    if (m.hpow > 0) {
        os << "\\hbar";
        if (m.hpow > 1) os << "^{" << m.hpow << "}";
        os << " ";
    }
    if (m.epow > 0) {
        os << "\\varepsilon";
        if (m.epow > 1) os << "^{" << m.epow << "}";
        os << " ";
    }
    for (const auto& jf : m.jets) {
        std::string base = "u";
        if (dim > 1) base += "^{" + std::to_string(jf.var.color) + "}";
        if (jf.var.order > 0) base += "_{" + std::to_string(jf.var.order) + "}";
        if (jf.power > 1) {
            if (dim > 1)
                os << "\\left(" << base << "\\right)^{" << jf.power << "}";
            else
                os << base << "^{" << jf.power << "}";
        } else {
            os << base;
        }
        os << " ";
    }
    std::string s = os.str();
    if (!s.empty() && s.back() == ' ') s.pop_back();
    return s.empty() ? "1" : s;
}

std::string to_latex(const DiffPoly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        bool negative = c.is_real() && c.re < 0;
        Scalar mag = negative ? -c : c;
        if (first) {
            if (negative) os << "-";
            first = false;
        } else {
            os << (negative ? " - " : " + ");
        }
        std::string mono = latex_mono(m, f.dim());
        if (mono == "1")
            os << latex_scalar(mag);
        else if (mag == Scalar(1))
            os << mono;
        else
            os << latex_scalar(mag) << "\\, " << mono;
    }
    return os.str();
}

std::string to_latex(const LocalFunctional& h) {
    return "\\int\\left(" + to_latex(h.density) + "\\right)dx";
}

} // namespace drh
