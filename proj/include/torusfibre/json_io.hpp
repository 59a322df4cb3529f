#pragma once

// JSON wire format. Exact quantities serialize as strings ("p/q", "p/q mod 1")
// or as canonical coordinate lists; objects keep insertion order so that
// output is byte-stable.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/fit.hpp"
#include "torusfibre/invariant.hpp"
#include "torusfibre/localization.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/spectrum.hpp"
#include "torusfibre/strata.hpp"

namespace torusfibre::json_io {

using Json = nlohmann::ordered_json;

// ---- reading helpers ------------------------------------------------------

inline Json parse_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorKind::Parse, what + ": malformed JSON (" + std::string(e.what()) + ")");
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    require(!in.bad(), ErrorKind::Io, "cannot read '" + path + "'");
    return ss.str();
}

inline Json load_file(const std::string& path) { return parse_text(read_file(path), path); }

inline const Json& field(const Json& j, const char* key, const std::string& where) {
    require(j.is_object(), ErrorKind::Parse, where + ": expected an object");
    auto it = j.find(key);
    require(it != j.end(), ErrorKind::Parse, where + ": missing field '" + key + "'");
    return *it;
}

inline std::int64_t as_int(const Json& j, const std::string& where) {
    require(j.is_number_integer(), ErrorKind::Parse, where + ": expected an integer");
    return j.get<std::int64_t>();
}

// ---- exact values ----------------------------------------------------------

inline Json to_json(const Rational& r) { return r.str(); }
inline Json to_json(const PhaseQ& p) { return p.str(); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    require(j.is_string(), ErrorKind::Parse, where + ": expected a rational string \"p/q\"");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const Error& e) {
        fail(ErrorKind::Parse, where + ": " + e.what());
    }
}

inline PhaseQ phase_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return PhaseQ(Rational(j.get<std::int64_t>()));
    require(j.is_string(), ErrorKind::Parse, where + ": expected a phase string \"p/q mod 1\"");
    try {
        return PhaseQ::parse(j.get<std::string>());
    } catch (const Error& e) {
        fail(ErrorKind::Parse, where + ": " + e.what());
    }
}

inline Json to_json(const Cyclotomic& c) {
    Json coeffs = Json::array();
    for (const auto& x : c.coeffs()) coeffs.push_back(x.str());
    return Json{{"conductor", c.conductor()}, {"coeffs", coeffs}};
}

inline Cyclotomic cyclotomic_from_json(const Json& j, const std::string& where) {
    const std::int64_t M = as_int(field(j, "conductor", where), where + ".conductor");
    require(M >= 1, ErrorKind::Parse, where + ": conductor must be positive");
    const Json& list = field(j, "coeffs", where);
    require(list.is_array(), ErrorKind::Parse, where + ".coeffs: expected an array");
    std::vector<Rational> c;
    for (std::size_t i = 0; i < list.size(); ++i) c.push_back(rational_from_json(list[i], where + ".coeffs[" + std::to_string(i) + "]"));
    return Cyclotomic::from_canonical(M, std::move(c));
}

inline Json to_json(const hp::Complex& z) { return Json::array({z.re.convert_to<double>(), z.im.convert_to<double>()}); }

// ---- orbit data -------------------------------------------------------------

inline OrbitData orbit_from_json(const Json& j) {
    const std::string w = "orbit";
    OrbitData d;
    d.m = as_int(field(j, "m", w), w + ".m");
    d.quotient_genus = as_int(field(j, "quotient_genus", w), w + ".quotient_genus");
    const Json& br = field(j, "branches", w);
    require(br.is_array(), ErrorKind::Parse, w + ".branches: expected an array");
    for (std::size_t i = 0; i < br.size(); ++i) {
        const std::string wi = w + ".branches[" + std::to_string(i) + "]";
        d.branches.push_back(Branch{as_int(field(br[i], "l", wi), wi + ".l"), as_int(field(br[i], "n", wi), wi + ".n")});
    }
    return d;
}

inline Json to_json(const OrbitData& d) {
    Json br = Json::array();
    for (const auto& b : d.branches) br.push_back(Json{{"l", b.l}, {"n", b.n}});
    return Json{{"m", d.m}, {"quotient_genus", d.quotient_genus}, {"branches", br}};
}

inline Json to_json(const ValidationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json e{{"check", std::string(to_string(c.check))}, {"passed", c.passed}};
        e["index"] = c.index ? Json(*c.index) : Json(nullptr);
        e["message"] = c.message;
        checks.push_back(std::move(e));
    }
    Json out{{"valid", r.valid()}};
    out["genus"] = r.genus ? Json(*r.genus) : Json(nullptr);
    out["checks"] = std::move(checks);
    return out;
}

inline Json to_json(const SeifertData& s) {
    Json pairs = Json::array();
    for (const auto& [a, b] : s.pairs) pairs.push_back(Json::array({a, b}));
    return Json{{"b", s.b.convert_to<std::int64_t>()}, {"genus", s.base_genus}, {"pairs", pairs}, {"euler", s.euler_number().str()}};
}

inline Json to_json(const EigenSpectrum& s) {
    return Json{{"m", s.m}, {"d", s.d}, {"wall_signature", wall_signature(s)}};
}

// ---- framing ---------------------------------------------------------------

inline Json to_json(const PiPolynomial& p) {
    Json c = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) c.push_back(p.coeff(i).str());
    return c;
}

inline Json to_json(const FramingPhase& f) { return Json{{"B", f.B.str()}, {"group", f.group.name()}}; }

inline Json to_json(const PhaseSeries& s) {
    Json coeffs = Json::array();
    for (const auto& c : s.coeffs) coeffs.push_back(c.str());
    return Json{{"leading", s.leading.str()}, {"shift", s.shift}, {"truncation", s.truncation}, {"symbol", "Pi = 2 pi i"}, {"coeffs", coeffs}};
}

// ---- strata ------------------------------------------------------------------

inline Json to_json(const ConjClassSU& c) { return Json(c.str()); }

inline Json to_json(const StratumDescriptor& s) {
    Json classes = Json::array(), cdelta = Json::array();
    for (const auto& c : s.classes) classes.push_back(to_json(c));
    for (const auto& c : s.c_delta) cdelta.push_back(to_json(c));
    Json out{{"index", s.index}, {"z", s.z}, {"classes", classes}, {"Z_delta", s.z_delta_order}, {"c_delta", cdelta}};
    out["ranks"] = s.ranks ? Json(s.ranks->r) : Json(nullptr);
    out["d_c"] = s.d_c() ? Json(*s.d_c()) : Json(nullptr);
    out["trivial"] = s.is_trivial();
    return out;
}

// ---- contributions and the invariant --------------------------------------------

inline Json to_json(const CsPhase& p) { return Json(p.str()); }

inline Json to_json(const ContributionPolynomial& t) {
    Json coeffs = Json::array();
    for (const auto& c : t.coeffs) coeffs.push_back(to_json(c));
    return Json{{"strata", t.strata}, {"phase", to_json(t.phase)}, {"d_c", t.d_c}, {"degree", t.degree()}, {"coeffs", coeffs}};
}

inline Json to_json(const ContributionSet& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms) terms.push_back(to_json(t));
    return Json{{"terms", terms}, {"non_geometric", s.non_geometric}, {"missing_oracle", s.missing_oracle}};
}

inline Json to_json(const InvariantModel& m) {
    Json terms = Json::array();
    for (const auto& t : m.terms) terms.push_back(to_json(t));
    return Json{{"framing", to_json(m.framing)}, {"terms", terms}};
}

// ---- fit -----------------------------------------------------------------------

inline Json to_json(const FitResult& r) {
    Json terms = Json::array();
    for (const auto& t : r.terms) {
        Json a = Json::array();
        for (const auto& x : t.a) a.push_back(to_json(x));
        terms.push_back(Json{{"q", t.q.str()}, {"d", t.d.str()}, {"b", to_json(t.b)}, {"b_error", t.b_error.convert_to<double>()}, {"a", a}});
    }
    return Json{{"terms", terms}, {"residual", r.residual.convert_to<double>()}, {"precision_bits", r.precision_bits}};
}

// ---- oracle files --------------------------------------------------------------

inline Graded<Rational> graded_from_json(const Json& j, const std::shared_ptr<const GradedRing>& ring, const std::string& where) {
    require(j.is_object(), ErrorKind::Parse, where + ": expected an object {\"monomial\": \"p/q\"}");
    Graded<Rational> out(ring);
    for (auto it = j.begin(); it != j.end(); ++it) {
        Monomial mono;
        try {
            mono = ring->parse_monomial(it.key());
        } catch (const Error& e) {
            fail(ErrorKind::Parse, where + ": " + e.what());
        }
        require(ring->degree(mono) <= ring->top_degree(), ErrorKind::OracleDegreeOverflow,
                where + ": monomial " + it.key() + " exceeds the top degree " + std::to_string(ring->top_degree()));
        out.add_term(mono, rational_from_json(it.value(), where + "." + it.key()));
    }
    return out;
}

inline ChernData chern_from_json(const Json& j, const std::shared_ptr<const GradedRing>& ring, const std::string& where) {
    ChernData out;
    out.rank = as_int(field(j, "rank", where), where + ".rank");
    if (auto it = j.find("classes"); it != j.end()) {
        require(it->is_array(), ErrorKind::Parse, where + ".classes: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            out.classes.push_back(graded_from_json((*it)[i], ring, where + ".classes[" + std::to_string(i) + "]"));
    }
    return out;
}

/// {"d_c", "generators": [{"name", "degree"}], "pairing": {monomial: "p/q"},
///  "chern": {"T_c": {"rank", "classes"}, "E[s][nu]": {...}, "omega": {monomial: "p/q"}}}
inline CohomologyOracle oracle_from_json(const Json& j, const std::string& where = "oracle") {
    CohomologyOracle o;
    o.d_c = as_int(field(j, "d_c", where), where + ".d_c");
    require(o.d_c >= 0, ErrorKind::Parse, where + ".d_c: must be non-negative");
    std::vector<Generator> gens;
    if (auto it = j.find("generators"); it != j.end()) {
        require(it->is_array(), ErrorKind::Parse, where + ".generators: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string wi = where + ".generators[" + std::to_string(i) + "]";
            const Json& name = field((*it)[i], "name", wi);
            require(name.is_string(), ErrorKind::Parse, wi + ".name: expected a string");
            gens.push_back(Generator{name.get<std::string>(), static_cast<int>(as_int(field((*it)[i], "degree", wi), wi + ".degree"))});
        }
    }
    o.ring = std::make_shared<const GradedRing>(std::move(gens), static_cast<int>(2 * o.d_c));
    const Graded<Rational> pairing = graded_from_json(field(j, "pairing", where), o.ring, where + ".pairing");
    for (const auto& [mono, c] : pairing.terms()) o.pairing[mono] = c;

    if (auto it = j.find("chern"); it != j.end()) {
        require(it->is_object(), ErrorKind::Parse, where + ".chern: expected an object");
        static const std::regex ekey(R"(E\[(\d+)\]\[(\d+)\])");
        for (auto c = it->begin(); c != it->end(); ++c) {
            const std::string key = c.key(), wk = where + ".chern." + key;
            std::smatch m;
            if (key == "T_c") {
                o.tangent = chern_from_json(c.value(), o.ring, wk);
            } else if (key == "omega") {
                o.omega = graded_from_json(c.value(), o.ring, wk);
            } else if (std::regex_match(key, m, ekey)) {
                const auto s = static_cast<std::size_t>(std::stoull(m[1].str()));
                const auto nu = static_cast<std::int64_t>(std::stoll(m[2].str()));
                o.fixed_point[{s, nu}] = chern_from_json(c.value(), o.ring, wk);
            } else {
                fail(ErrorKind::Parse, wk + ": unknown entry (expected T_c, omega or E[s][nu])");
            }
        }
    }
    o.validate();
    return o;
}

/// {"<stratum index>": "p/q", ...}
inline std::map<std::size_t, PhaseQ> phases_from_json(const Json& j, const std::string& where = "phases") {
    require(j.is_object(), ErrorKind::Parse, where + ": expected an object {\"stratum_index\": \"p/q\"}");
    std::map<std::size_t, PhaseQ> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        require(!key.empty() && key.find_first_not_of("0123456789") == std::string::npos, ErrorKind::Parse,
                where + ": key '" + key + "' is not a stratum index");
        out[static_cast<std::size_t>(std::stoull(key))] = phase_from_json(it.value(), where + "." + key);
    }
    return out;
}

} // namespace torusfibre::json_io
