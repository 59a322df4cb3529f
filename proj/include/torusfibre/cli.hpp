#pragma once

// Command dispatch shared by the torusfibre executable and its tests.
// Output is a pure function of the inputs: JSON with canonical ordering, or a
// plain-text table. Exit codes: 0 success, 1 validation failure, 2 violated
// internal invariant, 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/fit.hpp"
#include "torusfibre/framing.hpp"
#include "torusfibre/invariant.hpp"
#include "torusfibre/json_io.hpp"
#include "torusfibre/localization.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/spectrum.hpp"
#include "torusfibre/strata.hpp"

namespace torusfibre::cli {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"validate", "seifert", "spectrum", "framing", "strata", "contributions", "invariant", "fit"};
    return names;
}

struct JobConfig {
    std::string command;
    std::optional<std::string> orbit_path;
    std::optional<OrbitData> orbit; // takes precedence over orbit_path
    GroupData group = GroupData::su(2);
    std::vector<std::int64_t> levels;
    std::optional<std::size_t> truncation;
    std::map<std::size_t, std::string> oracle_paths; // stratum index -> oracle file
    std::optional<std::string> phases_path;
    std::optional<std::string> samples_path;
    FitOptions fit;
    unsigned precision_bits = hp::mantissa_bits_from_env();
    std::size_t max_tuples = EnumerationLimits{}.max_tuples;
    bool table = false;
};

struct CommandOutput {
    int exit_code = 0;
    std::string out;
    std::string err;
};

inline int exit_code_for(ErrorKind k) { return static_cast<int>(category(k)); }

namespace detail {

using json_io::Json;

inline OrbitData load_orbit(const JobConfig& c) {
    if (c.orbit) return *c.orbit;
    require(c.orbit_path.has_value(), ErrorKind::Parse, "command '" + c.command + "' needs --orbit");
    return json_io::orbit_from_json(json_io::load_file(*c.orbit_path));
}

/// Cross-module sum rules re-asserted on every pipeline run: e = 0, sum d = g, d_0 = g~.
inline std::int64_t assert_sum_rules(const OrbitData& d) {
    const std::int64_t g = require_valid(d);
    seifert_invariants(d);
    eigen_dimensions(d);
    return g;
}

inline std::map<std::size_t, CohomologyOracle> load_oracles(const JobConfig& c) {
    std::map<std::size_t, CohomologyOracle> out;
    for (const auto& [idx, path] : c.oracle_paths) out.emplace(idx, json_io::oracle_from_json(json_io::load_file(path), path));
    return out;
}

inline std::map<std::size_t, PhaseQ> load_phases(const JobConfig& c) {
    if (!c.phases_path) return {};
    return json_io::phases_from_json(json_io::load_file(*c.phases_path), *c.phases_path);
}

inline void check_indices(const std::map<std::size_t, CohomologyOracle>& oracles, const std::map<std::size_t, PhaseQ>& phases,
                          std::size_t count) {
    for (const auto& [i, o] : oracles)
        require(i < count, ErrorKind::Parse, "oracle given for stratum " + std::to_string(i) + ", but there are only " + std::to_string(count));
    for (const auto& [i, q] : phases)
        require(i < count, ErrorKind::Parse, "phase given for stratum " + std::to_string(i) + ", but there are only " + std::to_string(count));
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}
template <class T>
std::string join_ints(const std::vector<T>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(std::to_string(x));
    return "[" + join(s, ", ") + "]";
}

inline std::string classes_str(const std::vector<ConjClassSU>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back("{" + join(c.str(), ",") + "}");
    return join(out, " ");
}

inline std::string cyclotomic_str(const Cyclotomic& c) {
    if (c.is_rational()) return c.to_rational().str();
    std::vector<std::string> terms;
    const auto coeffs = c.coeffs();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j].is_zero()) continue;
        terms.push_back(j == 0 ? coeffs[j].str() : "(" + coeffs[j].str() + ")*z" + std::to_string(c.conductor()) + "^" + std::to_string(j));
    }
    return join(terms, " + ");
}

inline std::string complex_str(const hp::Complex& z, unsigned digits) {
    return hp::to_string(z.re, digits) + (z.im < 0 ? " - " : " + ") + hp::to_string(abs(z.im), digits) + "i";
}

// ---- commands ------------------------------------------------------------------

inline std::string run_validate(const JobConfig& c, int& code) {
    const OrbitData d = load_orbit(c);
    const auto rep = validate_orbit(d);
    code = rep.valid() ? 0 : 1;
    if (!c.table) return json_io::to_json(rep).dump(2);
    std::ostringstream os;
    os << "valid: " << (rep.valid() ? "yes" : "no") << "\n";
    if (rep.genus) os << "genus: " << *rep.genus << "\n";
    for (const auto& ch : rep.checks) {
        os << to_string(ch.check) << ": " << (ch.passed ? "pass" : "FAIL");
        if (ch.index) os << " (branch " << *ch.index << ")";
        if (!ch.passed) os << "  " << ch.message;
        os << "\n";
    }
    return os.str();
}

inline std::string run_seifert(const JobConfig& c) {
    const OrbitData d = load_orbit(c);
    assert_sum_rules(d);
    const auto s = seifert_invariants(d);
    if (!c.table) return json_io::to_json(s).dump(2);
    std::ostringstream os;
    os << "b: " << s.b << "\ngenus: " << s.base_genus << "\npairs:";
    for (const auto& [a, b] : s.pairs) os << " (" << a << "," << b << ")";
    os << "\neuler: " << s.euler_number().str() << "\n";
    return os.str();
}

inline std::string run_spectrum(const JobConfig& c) {
    const OrbitData d = load_orbit(c);
    assert_sum_rules(d);
    const auto s = eigen_dimensions(d);
    if (!c.table) return json_io::to_json(s).dump(2);
    std::ostringstream os;
    os << "m: " << s.m << "\ngenus: " << s.genus() << "\n";
    for (std::size_t a = 0; a < s.d.size(); ++a) os << "d[" << a << "] = " << s.d[a] << "\n";
    os << "wall_signature: " << wall_signature(s) << "\n";
    return os.str();
}

inline std::string run_framing(const JobConfig& c) {
    const OrbitData d = load_orbit(c);
    assert_sum_rules(d);
    const auto f = framing_phase(eigen_dimensions(d), c.group);
    auto levels = c.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    Json j = json_io::to_json(f);
    Json at = Json::object();
    for (auto k : levels) at[std::to_string(k)] = framing_evaluate(f, k).str();
    if (!levels.empty()) j["phase_at_k"] = at;
    if (c.truncation) j["series"] = json_io::to_json(framing_series(f, *c.truncation));
    if (!c.table) return j.dump(2);
    std::ostringstream os;
    os << "group: " << f.group.name() << "\nB: " << f.B.str() << "\n";
    for (auto k : levels) os << "phase at k=" << k << ": " << framing_evaluate(f, k).str() << "\n";
    if (c.truncation) {
        const auto s = framing_series(f, *c.truncation);
        os << "series: exp(2 pi i " << s.leading.str() << ") * sum_n c_n (k+" << s.shift << ")^-n, Pi = 2 pi i\n";
        for (std::size_t n = 0; n < s.coeffs.size(); ++n) os << "  c_" << n << " = " << s.coeffs[n].str() << "\n";
    }
    return os.str();
}

inline std::string run_strata(const JobConfig& c) {
    const OrbitData d = load_orbit(c);
    assert_sum_rules(d);
    const auto strata = enumerate_strata(d, c.group, {c.max_tuples});
    Json list = Json::array();
    for (const auto& s : strata) list.push_back(json_io::to_json(s));
    if (!c.table) return Json{{"group", c.group.name()}, {"count", strata.size()}, {"strata", list}}.dump(2);
    std::ostringstream os;
    os << "group: " << c.group.name() << "\ncount: " << strata.size() << "\n";
    for (const auto& s : strata) {
        os << "#" << s.index << " z=" << s.z << " |Z_delta|=" << s.z_delta_order << " classes " << classes_str(s.classes);
        if (s.ranks) os << " ranks " << join_ints(s.ranks->r) << " d_c=" << (s.d_c() ? std::to_string(*s.d_c()) : std::string("virtual"));
        if (s.is_trivial()) os << " (trivial)";
        os << "\n";
    }
    return os.str();
}

struct Pipeline {
    OrbitData data;
    std::vector<StratumDescriptor> strata;
    ContributionSet contributions;
};

inline Pipeline run_pipeline(const JobConfig& c, bool require_all) {
    Pipeline p{load_orbit(c), {}, {}};
    assert_sum_rules(p.data);
    p.strata = enumerate_strata(p.data, c.group, {c.max_tuples});
    const auto oracles = load_oracles(c);
    const auto phases = load_phases(c);
    check_indices(oracles, phases, p.strata.size());
    p.contributions = compute_contributions(p.data, c.group, p.strata, oracles, phases, require_all);
    return p;
}

inline std::string terms_table(const std::vector<ContributionPolynomial>& terms) {
    std::ostringstream os;
    for (const auto& t : terms) {
        os << "phase " << t.phase.str() << " strata " << join_ints(t.strata) << " degree " << t.degree() << "\n";
        for (std::size_t j = 0; j < t.coeffs.size(); ++j)
            if (!t.coeffs[j].is_zero()) os << "  k^" << j << ": " << cyclotomic_str(t.coeffs[j]) << "\n";
    }
    return os.str();
}

inline std::string run_contributions(const JobConfig& c) {
    const auto p = run_pipeline(c, false);
    Json j = json_io::to_json(p.contributions);
    j["strata_count"] = p.strata.size();
    if (!c.table) return j.dump(2);
    std::ostringstream os;
    os << "strata: " << p.strata.size() << "\nnon-geometric: " << join_ints(p.contributions.non_geometric)
       << "\nmissing oracle: " << join_ints(p.contributions.missing_oracle) << "\n"
       << terms_table(p.contributions.terms);
    return os.str();
}

inline std::string run_invariant(const JobConfig& c) {
    const auto p = run_pipeline(c, true);
    const auto model = assemble_invariant(p.data, c.group, p.contributions);
    auto levels = c.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<InvariantValue> values;
    for (auto k : levels) values.push_back(evaluate_invariant(model, k, c.precision_bits));

    if (!c.table) {
        Json j = json_io::to_json(model);
        j["non_geometric"] = p.contributions.non_geometric;
        j["symbolic"] = model.has_symbolic_phase();
        Json vals = Json::array();
        for (std::size_t i = 0; i < levels.size(); ++i)
            vals.push_back(Json{{"k", levels[i]}, {"exact", json_io::to_json(values[i].exact)}, {"numeric", json_io::to_json(values[i].numeric)}});
        if (!levels.empty()) j["values"] = vals;
        return j.dump(2);
    }
    std::ostringstream os;
    os << "framing: B = " << model.framing.B.str() << " (" << model.framing.group.name() << ")\n" << terms_table(model.terms);
    for (std::size_t i = 0; i < levels.size(); ++i)
        os << "Z(" << levels[i] << ") = " << cyclotomic_str(values[i].exact) << "\n      ~ " << complex_str(values[i].numeric, 20) << "\n";
    return os.str();
}

inline std::string run_fit(const JobConfig& c) {
    require(c.samples_path.has_value(), ErrorKind::Parse, "command 'fit' needs --samples");
    std::ifstream in(*c.samples_path);
    require(in.good(), ErrorKind::Io, "cannot open '" + *c.samples_path + "'");
    FitOptions o = c.fit;
    o.precision_bits = c.precision_bits;
    const auto samples = parse_samples_csv(in, o.precision_bits);
    const auto r = fit_expansion(samples, o);
    if (!c.table) return json_io::to_json(r).dump(2);
    std::ostringstream os;
    os << "terms: " << r.terms.size() << "\nresidual: " << hp::to_string(r.residual, 6) << "\n";
    for (const auto& t : r.terms)
        os << "q=" << t.q.str() << " d=" << t.d.str() << " b=" << complex_str(t.b, 12) << " +/- " << hp::to_string(t.b_error, 3) << "\n";
    return os.str();
}

} // namespace detail

/// Runs one command; never throws.
inline CommandOutput run_command(const JobConfig& c) {
    CommandOutput res;
    try {
        std::string out;
        if (c.command == "validate") out = detail::run_validate(c, res.exit_code);
        else if (c.command == "seifert") out = detail::run_seifert(c);
        else if (c.command == "spectrum") out = detail::run_spectrum(c);
        else if (c.command == "framing") out = detail::run_framing(c);
        else if (c.command == "strata") out = detail::run_strata(c);
        else if (c.command == "contributions") out = detail::run_contributions(c);
        else if (c.command == "invariant") out = detail::run_invariant(c);
        else if (c.command == "fit") out = detail::run_fit(c);
        else fail(ErrorKind::Parse, "unknown command '" + c.command + "'");
        if (!out.empty() && out.back() != '\n') out.push_back('\n');
        res.out = std::move(out);
        if (res.exit_code == 1 && c.command == "validate") {
            const auto rep = validate_orbit(detail::load_orbit(c));
            if (const auto* f = rep.first_failure())
                res.err = "validation failed: " + std::string(to_string(f->check)) + " check: " + f->message + "\n";
        }
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.kind());
        res.out.clear();
        res.err = std::string("error: ") + e.what() + "\n";
    } catch (const std::bad_alloc&) {
        res.exit_code = 2;
        res.out.clear();
        res.err = "error: out of memory\n";
    }
    return res;
}

} // namespace torusfibre::cli
