// torusfibre: WRT invariants of finite-order mapping tori from branch data.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "torusfibre/cli.hpp"

int main(int argc, char** argv) {
    using namespace torusfibre;
    CLI::App app{"Exact invariants of finite-order mapping tori"};
    app.require_subcommand(1);

    cli::JobConfig cfg;
    std::string orbit, group = "SU2", format = "json", phases, samples;
    std::vector<std::string> oracles;
    std::int64_t truncation = -1;
    bool integer_exponents = false;

    auto common = [&](CLI::App* sub, bool needs_orbit) {
        if (needs_orbit) sub->add_option("--orbit", orbit, "orbit data JSON")->required();
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "table"}));
        sub->add_option("--precision", cfg.precision_bits, "mantissa bits for floating output")->check(CLI::Range(24u, 100000u));
    };
    auto with_group = [&](CLI::App* sub) { sub->add_option("--group", group, "gauge group, e.g. SU2 or SU(3)"); };
    auto with_levels = [&](CLI::App* sub) { sub->add_option("--level", cfg.levels, "level k (repeatable)")->check(CLI::PositiveNumber); };
    auto with_pipeline = [&](CLI::App* sub) {
        with_group(sub);
        sub->add_option("--oracle", oracles, "INDEX=FILE cohomology oracle for a stratum (repeatable)");
        sub->add_option("--phases", phases, "Chern-Simons phase file {\"index\": \"p/q\"}");
        sub->add_option("--max-tuples", cfg.max_tuples, "bound on enumerated class tuples");
    };

    auto* validate = app.add_subcommand("validate", "check branch data");
    common(validate, true);
    auto* seifert = app.add_subcommand("seifert", "Seifert invariants of the mapping torus");
    common(seifert, true);
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue multiplicities on holomorphic differentials");
    common(spectrum, true);
    auto* framing = app.add_subcommand("framing", "framing correction phase");
    common(framing, true);
    with_group(framing);
    with_levels(framing);
    framing->add_option("--truncation", truncation, "series truncation L")->check(CLI::NonNegativeNumber);
    auto* strata = app.add_subcommand("strata", "fixed-point strata of the moduli space");
    common(strata, true);
    with_group(strata);
    strata->add_option("--max-tuples", cfg.max_tuples, "bound on enumerated class tuples");
    auto* contributions = app.add_subcommand("contributions", "localization contribution of each stratum");
    common(contributions, true);
    with_pipeline(contributions);
    auto* invariant = app.add_subcommand("invariant", "assemble and evaluate the invariant");
    common(invariant, true);
    with_pipeline(invariant);
    with_levels(invariant);
    auto* fit = app.add_subcommand("fit", "recover expansion data from sampled values");
    common(fit, false);
    fit->add_option("--samples", samples, "CSV file of k,re,im")->required();
    fit->add_option("--qmax", cfg.fit.q_max, "phase denominator bound")->check(CLI::PositiveNumber);
    fit->add_option("--terms", cfg.fit.max_terms, "maximal number of phases")->check(CLI::PositiveNumber);
    fit->add_option("--degree", cfg.fit.degree_bound, "maximal exponent");
    fit->add_option("--min-exponent", cfg.fit.min_exponent, "lowest exponent in the basis");
    fit->add_option("--shift", cfg.fit.shift, "expand in k + shift");
    fit->add_option("--residual-tol", cfg.fit.residual_tolerance, "relative residual tolerance");
    fit->add_flag("--integer-exponents", integer_exponents, "integer exponent steps only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    cfg.table = format == "table";
    cfg.fit.half_integer = !integer_exponents;
    if (truncation >= 0) cfg.truncation = static_cast<std::size_t>(truncation);
    if (!phases.empty()) cfg.phases_path = phases;
    if (!samples.empty()) cfg.samples_path = samples;
    if (!orbit.empty()) cfg.orbit_path = orbit;
    try {
        cfg.group = GroupData::parse(group);
        for (const auto& spec : oracles) {
            const auto eq = spec.find('=');
            require(eq != std::string::npos && eq > 0 && spec.find_first_not_of("0123456789") == eq, ErrorKind::Parse,
                    "--oracle expects INDEX=FILE, got '" + spec + "'");
            cfg.oracle_paths[std::stoull(spec.substr(0, eq))] = spec.substr(eq + 1);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e.kind());
    }

    const auto res = cli::run_command(cfg);
    std::cout << res.out;
    std::cerr << res.err;
    return res.exit_code;
}
