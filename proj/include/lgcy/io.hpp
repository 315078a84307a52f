#pragma once

#include "lgcy/series.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace lgcy {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return r.get_str(); }

// Integers as JSON numbers when they fit, otherwise decimal strings.
inline Json coeff_json(const Rational& r) {
    if (is_integer(r) && r.get_num().fits_slong_p()) return r.get_num().get_si();
    return r.get_str();
}

inline Json cyclotomic_json(const Cyclotomic& c) {
    Json a = Json::array();
    for (auto& v : c.coeffs()) a.push_back(coeff_json(v));
    return a;
}

inline Json series_to_json(const PuiseuxSeries& s) {
    Json j;
    j["m"] = s.order();
    j["D"] = s.denom();
    Json terms = Json::array();
    for (auto& [q, y, c] : s.terms()) {
        Json t;
        t["q"] = rational_json(q);
        t["y"] = rational_json(y);
        t["coeff"] = cyclotomic_json(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Rational json_rational(const Json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    return parse_rational(v.get<std::string>());
}

inline PuiseuxSeries series_from_json(const Json& j) {
    int m = j.at("m").get<int>(), D = j.at("D").get<int>();
    PuiseuxSeries s(m, D);
    Support sup = Support::none();
    for (auto& t : j.at("terms")) {
        std::vector<Rational> p;
        for (auto& v : t.at("coeff")) p.push_back(json_rational(v));
        Rational q = json_rational(t.at("q")), y = json_rational(t.at("y"));
        s.add_term(q, y, Cyclotomic::from_poly(m, p));
        sup = Support::join(sup, Support::point(q, y));
    }
    s.set_support(sup);
    return s;
}

inline std::string series_to_tsv(const PuiseuxSeries& s) {
    std::ostringstream os;
    os << "q\ty\tcoeff\n";
    for (auto& [q, y, c] : s.terms()) {
        os << q.get_str() << '\t' << y.get_str() << '\t';
        for (size_t i = 0; i < c.coeffs().size(); ++i) os << (i ? "," : "") << c.coeffs()[i].get_str();
        os << '\n';
    }
    return os.str();
}

}  // namespace lgcy
