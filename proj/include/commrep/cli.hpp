#pragma once

// Command-line front end. `run` is a plain function over an argument list and
// two streams so tests can drive it without spawning processes.
//
// Exit codes: 0 success, 1 usage/parse/internal error, 2 domain refusal or
// negative verdict, 3 search budget exhausted. Standard output always carries
// exactly one JSON document.

#include <commrep/json_io.hpp>
#include <commrep/witness.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace commrep::cli {

using io::json;

enum ExitCode : int { kOk = 0, kError = 1, kRefused = 2, kBudget = 3 };

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("'") + path + "' is not valid JSON: " + e.what());
    }
}

inline void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

inline int fail(std::ostream& out, std::ostream& err, int code, const std::string& kind, const std::string& message) {
    emit(out, {{"error", {{"code", kind}, {"message", message}}}});
    err << "commrep: " << kind << ": " << message << '\n';
    return code;
}

inline FieldSpec parse_field_option(const std::string& text) { return FieldSpec::parse(text); }

}  // namespace detail

struct SelfTestCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Built-in acceptance checks, all in memory.
inline std::vector<SelfTestCheck> selftest_checks() {
    std::vector<SelfTestCheck> checks;
    auto record = [&](std::string name, auto&& body) {
        SelfTestCheck c{std::move(name), false, {}};
        try {
            c.pass = body(c.detail);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = e.what();
        }
        checks.push_back(std::move(c));
    };

    const Rationals q;
    record("witness round-trips for n <= 10", [&](std::string& detail) {
        for (std::size_t n = 1; n <= 10; ++n) {
            auto w = sharp_witness(n, q.from_int(2), q);
            auto doc = io::assignment_to_json(w);
            auto back = io::assignment_from_json(q, json::parse(doc.dump()));
            if (!(back == w) || io::assignment_to_json(back).dump() != doc.dump()) {
                detail = "JSON round trip differs at n = " + std::to_string(n);
                return false;
            }
            if (!realizes(back, matching_graph(n))) {
                detail = "witness does not realize matching_graph(" + std::to_string(n) + ")";
                return false;
            }
            auto pairs = pairs_from_assignment(back);
            auto cert = build_certificate(pairs);
            if (cert.bound != n + 1 || !verify_certificate(cert, pairs)) {
                detail = "certificate failed at n = " + std::to_string(n);
                return false;
            }
        }
        return true;
    });

    record("n = 1 certificate trace", [&](std::string& detail) {
        auto cert = build_certificate(pairs_from_assignment(sharp_witness(1, q.from_int(2), q)));
        auto expect_v = Matrix<Rationals>::column(q, {0, 1});
        auto expect_alpha = Matrix<Rationals>::row(q, {1, 1});
        auto expect_gram = Matrix<Rationals>(q, 2, 2, {0, -2, 2, 0});
        auto expect_z = Matrix<Rationals>(q, 2, 2, {0, -2, 0, 0});
        bool ok = cert.v == expect_v && cert.alpha == expect_alpha && cert.gram == expect_gram &&
                  cert.z.front() == expect_z && cert.image_rank == 2 && cert.bound == 2;
        if (!ok) detail = io::certificate_to_json(cert).dump();
        return ok;
    });

    record("matching_graph(2) over F_2 is exactly 3", [&](std::string& detail) {
        PrimeField f2(2);
        SearchOptions opts;
        opts.r_max = 3;
        opts.budget = 100'000'000;
        opts.hint = sharp_witness(2, f2.one(), f2);
        auto rep = min_realization_dim(matching_graph(2), f2, opts);
        bool ok = rep.status == SearchStatus::Exact && rep.lower == 3 && rep.levels.size() == 2 &&
                  rep.levels[0].method == LevelOutcome::Method::Exhaustive &&
                  rep.levels[1].method == LevelOutcome::Method::Exhaustive;
        if (!ok) detail = io::search_report_to_json(rep, 1).dump();
        return ok;
    });
    return checks;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact toolkit for realizing non-commutation graphs by matrices", "commrep"};
    app.require_subcommand(1);

    std::size_t n = 0;
    std::string lambda, field_text, input, graph_path, assignment_path, cert_path, hint_path, module_path, dims_path;
    std::string mode_text = "all";
    std::size_t r_max = 4;
    std::uint64_t budget = 10'000'000;
    unsigned jobs = 1;

    auto* witness = app.add_subcommand("witness", "Emit the sharp (n+1)-dimensional matching-graph witness");
    witness->add_option("--n", n, "number of pairs")->required()->check(CLI::PositiveNumber);
    witness->add_option("--lambda", lambda, "nonzero scalar, e.g. 2, -1, 1/2")->required();
    witness->add_option("--field", field_text, "Q or Fp:<prime>")->required();

    auto* verify_graph = app.add_subcommand("verify-graph", "Check that an assignment realizes a graph");
    verify_graph->add_option("--graph", graph_path)->required();
    verify_graph->add_option("--assignment", assignment_path)->required();

    auto* certify = app.add_subcommand("certify", "Build a lower-bound certificate for (a_i, b_i) pairs");
    certify->add_option("--input", input, "assignment (a_1..a_n, b_1..b_n) or {\"pairs\": ...}")->required();

    auto* verify_cert = app.add_subcommand("verify-cert", "Independently re-check a certificate");
    verify_cert->add_option("--cert", cert_path)->required();
    verify_cert->add_option("--input", input)->required();

    auto* search = app.add_subcommand("search", "Bracket the minimal realization dimension over F_p");
    search->add_option("--graph", graph_path)->required();
    search->add_option("--field", field_text)->required();
    search->add_option("--rmax", r_max)->check(CLI::PositiveNumber);
    search->add_option("--mode", mode_text)->check(CLI::IsMember({"all", "invertible_only"}));
    search->add_option("--budget", budget, "constraint-check node limit")->check(CLI::PositiveNumber);
    search->add_option("--hint", hint_path, "assignment giving an upper bound");
    search->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));

    auto* split = app.add_subcommand("split", "Composition factor dimensions of a module over F_p");
    split->add_option("--module", module_path)->required();

    auto* count = app.add_subcommand("count-check", "Check the composition-factor counting chain");
    count->add_option("--dims", dims_path)->required();

    auto* selftest = app.add_subcommand("selftest", "Run the built-in acceptance checks");

    std::vector<std::string> argv_store{"commrep"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        return detail::fail(out, err, kError, "usage", e.what());
    }

    try {
        if (*witness) {
            auto spec = detail::parse_field_option(field_text);
            return with_field(spec, [&](const auto& f) {
                auto lam = f.parse(lambda);
                auto w = sharp_witness(n, lam, f);
                auto doc = io::assignment_to_json(w);
                doc["ordering"] = "a_1..a_n,b_1..b_n";
                doc["n"] = n;
                doc["lambda"] = io::scalar_to_json(f, lam);
                detail::emit(out, doc);
                return int{kOk};
            });
        }
        if (*verify_graph) {
            auto g = io::graph_from_json(detail::read_json_file(graph_path));
            auto doc = detail::read_json_file(assignment_path);
            auto spec = io::field_from_json(io::member(doc, "field", ""), "/field");
            return with_field(spec, [&](const auto& f) {
                auto a = io::assignment_from_json(f, doc);
                auto check = realizes(a, g);
                json violations = json::array();
                for (const auto& v : check.violations)
                    violations.push_back({{"pair", {v.u, v.v}}, {"edge", v.is_edge}, {"commutes", v.commutes}});
                detail::emit(out, {{"realizes", check.realizes}, {"violations", violations}});
                return int{check.realizes ? kOk : kRefused};
            });
        }
        if (*certify) {
            auto doc = detail::read_json_file(input);
            auto spec = io::field_from_json(io::member(doc, "field", ""), "/field");
            return with_field(spec, [&](const auto& f) {
                auto cert = build_certificate(io::pairs_from_json(f, doc));
                detail::emit(out, io::certificate_to_json(cert));
                return int{kOk};
            });
        }
        if (*verify_cert) {
            auto cdoc = detail::read_json_file(cert_path);
            auto pdoc = detail::read_json_file(input);
            auto spec = io::field_from_json(io::member(cdoc, "field", ""), "/field");
            return with_field(spec, [&](const auto& f) {
                auto cert = io::certificate_from_json(f, cdoc);
                auto result = verify_certificate(cert, io::pairs_from_json(f, pdoc));
                detail::emit(out, io::verification_to_json(result));
                return int{result.valid() ? kOk : kRefused};
            });
        }
        if (*search) {
            auto spec = detail::parse_field_option(field_text);
            if (spec.is_rationals()) throw GuardViolation("search enumerates matrices and needs a prime field");
            PrimeField f(spec.characteristic());
            SearchOptions opts;
            opts.r_max = r_max;
            opts.mode = parse_search_mode(mode_text);
            opts.budget = budget;
            opts.jobs = jobs;
            if (!hint_path.empty()) opts.hint = io::assignment_from_json(f, detail::read_json_file(hint_path));
            auto rep = min_realization_dim(io::graph_from_json(detail::read_json_file(graph_path)), f, opts);
            detail::emit(out, io::search_report_to_json(rep, jobs));
            return rep.status == SearchStatus::ExhaustedBudget ? kBudget : kOk;
        }
        if (*split) {
            auto spec = io::module_from_json(detail::read_json_file(module_path));
            auto rep = composition_factor_dims(spec);
            bool tri = std::all_of(rep.factor_dims.begin(), rep.factor_dims.end(), [](std::size_t d) { return d == 1; });
            detail::emit(out, io::composition_to_json(rep, tri));
            return kOk;
        }
        if (*count) {
            auto result = theorem3_count_check(io::dims_from_json(detail::read_json_file(dims_path)));
            detail::emit(out, io::count_check_to_json(result));
            return result.verdict == CountCheck::Verdict::Satisfied ? kOk : kRefused;
        }
        if (*selftest) {
            auto checks = selftest_checks();
            json list = json::array();
            bool all = true;
            for (const auto& c : checks) {
                list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
                all = all && c.pass;
            }
            detail::emit(out, {{"checks", list}, {"pass", all}});
            return all ? kOk : kError;
        }
    } catch (const DomainRefusal& e) {
        return detail::fail(out, err, kRefused, e.code(), e.what());
    } catch (const ParseError& e) {
        return detail::fail(out, err, kError, "parse_error", e.what());
    } catch (const InvalidArgument& e) {
        return detail::fail(out, err, kError, "invalid_argument", e.what());
    } catch (const std::exception& e) {
        return detail::fail(out, err, kError, "internal", e.what());
    }
    return detail::fail(out, err, kError, "usage", "no subcommand");
}

}  // namespace commrep::cli
