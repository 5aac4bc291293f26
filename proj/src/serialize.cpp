#include "drh/serialize.hpp"

namespace drh {

OrderedJson to_json(const Scalar& c) {
    if (c.is_real()) return OrderedJson(rat_str(c.re));
    return OrderedJson{{"re", rat_str(c.re)}, {"im", rat_str(c.im)}};
}

Scalar scalar_from_json(const OrderedJson& j) {
    if (j.is_string()) return Scalar(rat_parse(j.get<std::string>()));
    if (j.is_object())
        return Scalar(rat_parse(j.at("re").get<std::string>()),
                      rat_parse(j.at("im").get<std::string>()));
    throw SchemaError("scalar: expected string or {re,im} object");
}

OrderedJson to_json(const DiffPoly& f) {
    OrderedJson terms = OrderedJson::array();
    for (const auto& [m, c] : f.terms()) {
        OrderedJson jets = OrderedJson::array();
        for (const auto& jf : m.jets)
            jets.push_back(OrderedJson::array({jf.var.color, jf.var.order, jf.power}));
        terms.push_back(OrderedJson{{"coeff", to_json(c)}, {"h", m.hpow}, {"e", m.epow},
                                    {"jets", jets}});
    }
    return OrderedJson{{"type", "diffpoly"}, {"dimension", f.dim()}, {"terms", terms}};
}

DiffPoly diffpoly_from_json(const OrderedJson& j) {
    if (!j.is_object() || j.value("type", "") != std::string("diffpoly"))
        throw SchemaError("diffpoly: wrong type tag");
    DiffPoly f(j.at("dimension").get<int>());
    for (const auto& t : j.at("terms")) {
        Mono m;
        m.hpow = t.at("h").get<int>();
        m.epow = t.at("e").get<int>();
        for (const auto& jf : t.at("jets")) {
            Mono one;
            one.jets.push_back({JetVar{jf.at(0).get<int>(), jf.at(1).get<int>()},
                                jf.at(2).get<int>()});
            m = m.times(one);
        }
        f.add_term(m, scalar_from_json(t.at("coeff")));
    }
    return f;
}

OrderedJson to_json(const LocalFunctional& h) {
    return OrderedJson{{"type", "local_functional"}, {"density", to_json(h.density)}};
}

LocalFunctional functional_from_json(const OrderedJson& j) {
    if (!j.is_object() || j.value("type", "") != std::string("local_functional"))
        throw SchemaError("local_functional: wrong type tag");
    return LocalFunctional(diffpoly_from_json(j.at("density")));
}

OrderedJson to_json(const HamOperator& K) {
    OrderedJson rows = OrderedJson::array();
    for (int r = 1; r <= K.dim(); ++r) {
        OrderedJson row = OrderedJson::array();
        for (int c = 1; c <= K.dim(); ++c) {
            OrderedJson entry = OrderedJson::array();
            for (const auto& t : K.entry(r, c))
                entry.push_back(OrderedJson{{"dx", t.dxpow}, {"coeff", to_json(t.coeff)}});
            row.push_back(entry);
        }
        rows.push_back(row);
    }
    return OrderedJson{{"type", "ham_operator"}, {"dimension", K.dim()}, {"entries", rows}};
}

HamOperator operator_from_json(const OrderedJson& j) {
    if (!j.is_object() || j.value("type", "") != std::string("ham_operator"))
        throw SchemaError("ham_operator: wrong type tag");
    HamOperator K(j.at("dimension").get<int>());
    const auto& rows = j.at("entries");
    for (int r = 1; r <= K.dim(); ++r)
        for (int c = 1; c <= K.dim(); ++c)
            for (const auto& t : rows.at(static_cast<std::size_t>(r - 1))
                                     .at(static_cast<std::size_t>(c - 1)))
                K.add_entry_term(r, c, diffpoly_from_json(t.at("coeff")), t.at("dx").get<int>());
    return K;
}

OrderedJson to_json(const BSeries& b) {
    OrderedJson terms = OrderedJson::array();
    for (const auto& [k, c] : b.terms()) {
        OrderedJson factors = OrderedJson::array();
        for (const auto& f : k.factors)
            factors.push_back(OrderedJson::array({f.color, f.expo}));
        terms.push_back(OrderedJson{{"coeff", to_json(c)}, {"h", k.hpow}, {"e", k.epow},
                                    {"factors", factors}});
    }
    return OrderedJson{{"type", "bseries"}, {"dimension", b.dim()}, {"terms", terms}};
}

BSeries bseries_from_json(const OrderedJson& j) {
    if (!j.is_object() || j.value("type", "") != std::string("bseries"))
        throw SchemaError("bseries: wrong type tag");
    BSeries b(j.at("dimension").get<int>());
    for (const auto& t : j.at("terms")) {
        BKey k;
        k.hpow = t.at("h").get<int>();
        k.epow = t.at("e").get<int>();
        for (const auto& f : t.at("factors"))
            k.factors.push_back({f.at(0).get<int>(), f.at(1).get<int>()});
        b.add_term(std::move(k), scalar_from_json(t.at("coeff")));
    }
    return b;
}

OrderedJson to_json(const Report& r) {
    OrderedJson checks = OrderedJson::array();
    for (const auto& c : r.checks) {
        OrderedJson w;
        w["genus_max"] = c.window.genus_max == Truncation::unlimited
                             ? OrderedJson(nullptr)
                             : OrderedJson(c.window.genus_max);
        w["deg_max"] = c.window.deg_max == Truncation::unlimited ? OrderedJson(nullptr)
                                                                 : OrderedJson(c.window.deg_max);
        w["eps_max"] = c.window.eps_max == Truncation::unlimited ? OrderedJson(nullptr)
                                                                 : OrderedJson(c.window.eps_max);
        checks.push_back(OrderedJson{{"name", c.name},
                                     {"window", w},
                                     {"pass", c.pass},
                                     {"witness", c.witness}});
    }
    return OrderedJson{{"type", "report"}, {"all_pass", r.all_pass()}, {"checks", checks}};
}

} // namespace drh
