#pragma once

// JSON encodings for every interchange document. Keys come out sorted
// (nlohmann::json uses std::map), scalars are decimal strings, so any
// document re-serializes byte for byte.

#include <commrep/certificate.hpp>
#include <commrep/commgraph.hpp>
#include <commrep/modsplit.hpp>
#include <commrep/search.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace commrep::io {

using nlohmann::json;

// ---------------------------------------------------------------- parsing helpers

inline std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

inline const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(join(path, key), "missing required member");
    return *it;
}

inline const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    return j;
}

inline std::uint64_t positive_int(const json& j, const std::string& path, bool allow_zero = false) {
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
    if (j.is_number_unsigned()) {
        auto v = j.get<std::uint64_t>();
        if (v == 0 && !allow_zero) throw ParseError(path, "expected a positive integer");
        return v;
    }
    auto v = j.get<std::int64_t>();
    if (v < 0 || (v == 0 && !allow_zero)) throw ParseError(path, "expected a positive integer");
    return static_cast<std::uint64_t>(v);
}

inline std::string string_value(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
}

inline FieldSpec field_from_json(const json& j, const std::string& path) {
    try {
        return FieldSpec::parse(string_value(j, path));
    } catch (const InvalidArgument& e) {
        throw ParseError(path, e.what());
    }
}

// ---------------------------------------------------------------- scalars

inline json scalar_to_json(const Rationals&, const mpq_class& q) {
    return json::array({q.get_num().get_str(), q.get_den().get_str()});
}

inline json scalar_to_json(const PrimeField&, std::uint64_t x) { return std::to_string(x); }

inline mpq_class scalar_from_json(const Rationals& f, const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw ParseError(path, "expected [\"num\", \"den\"] decimal strings");
    try {
        auto num = detail::parse_integer(j[0].get<std::string>());
        auto den = detail::parse_integer(j[1].get<std::string>());
        if (sgn(den) == 0) throw ParseError(path, "zero denominator");
        return f.make(num, den);
    } catch (const InvalidArgument& e) {
        throw ParseError(path, e.what());
    }
}

inline std::uint64_t scalar_from_json(const PrimeField& f, const json& j, const std::string& path) {
    auto s = string_value(j, path);
    if (s.empty() || s.size() > 10 || !detail::is_decimal_integer(s) || s.front() == '-' || s.front() == '+')
        throw ParseError(path, "expected a residue as a decimal string");
    auto v = std::stoull(s);
    if (v >= f.characteristic())
        throw ParseError(path, "residue " + s + " is not in [0, " + std::to_string(f.characteristic()) + ")");
    return v;
}

// ---------------------------------------------------------------- matrices

template <ExactField F>
json matrix_to_json(const Matrix<F>& m) {
    json entries = json::array();
    for (const auto& e : m.entries()) entries.push_back(scalar_to_json(m.field(), e));
    return {{"field", m.field().spec().to_string()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

template <ExactField F>
Matrix<F> matrix_from_json(const F& field, const json& j, const std::string& path) {
    auto spec = field_from_json(member(j, "field", path), join(path, "field"));
    if (!(spec == field.spec()))
        throw ParseError(join(path, "field"), "matrix field " + spec.to_string() + " differs from " + field.spec().to_string());
    const auto rows = positive_int(member(j, "rows", path), join(path, "rows"));
    const auto cols = positive_int(member(j, "cols", path), join(path, "cols"));
    const auto epath = join(path, "entries");
    const auto& entries = array(member(j, "entries", path), epath);
    if (entries.size() != rows * cols)
        throw ParseError(epath, "expected " + std::to_string(rows * cols) + " entries, got " + std::to_string(entries.size()));
    std::vector<typename F::value_type> values;
    values.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) values.push_back(scalar_from_json(field, entries[k], join(epath, k)));
    return Matrix<F>(field, rows, cols, std::move(values));
}

template <ExactField F>
json vector_to_json(const Matrix<F>& m) {
    json out = json::array();
    for (const auto& e : m.entries()) out.push_back(scalar_to_json(m.field(), e));
    return out;
}

template <ExactField F>
Matrix<F> vector_from_json(const F& field, const json& j, const std::string& path, bool as_row) {
    array(j, path);
    if (j.empty()) throw ParseError(path, "expected a non-empty vector");
    std::vector<typename F::value_type> values;
    for (std::size_t k = 0; k < j.size(); ++k) values.push_back(scalar_from_json(field, j[k], join(path, k)));
    return as_row ? Matrix<F>::row(field, std::move(values)) : Matrix<F>::column(field, std::move(values));
}

// ---------------------------------------------------------------- graphs and assignments

inline json graph_to_json(const CommGraph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

inline CommGraph graph_from_json(const json& j, const std::string& path = "") {
    const auto m = positive_int(member(j, "vertices", path), join(path, "vertices"));
    CommGraph g(m);
    const auto epath = join(path, "edges");
    const auto& edges = array(member(j, "edges", path), epath);
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto p = join(epath, k);
        if (!edges[k].is_array() || edges[k].size() != 2) throw ParseError(p, "expected [u, v]");
        try {
            g.add_edge(positive_int(edges[k][0], join(p, 0)), positive_int(edges[k][1], join(p, 1)));
        } catch (const InvalidArgument& e) {
            throw ParseError(p, e.what());
        }
    }
    return g;
}

template <ExactField F>
json assignment_to_json(const Assignment<F>& a) {
    json ms = json::array();
    for (const auto& m : a.matrices()) ms.push_back(matrix_to_json(m));
    return {{"field", a.field().spec().to_string()}, {"dim", a.dim()}, {"matrices", ms}};
}

template <ExactField F>
std::vector<Matrix<F>> matrix_list_from_json(const F& field, const json& j, const std::string& path) {
    array(j, path);
    if (j.empty()) throw ParseError(path, "expected a non-empty list of matrices");
    std::vector<Matrix<F>> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix_from_json(field, j[k], join(path, k)));
    return out;
}

template <ExactField F>
Assignment<F> assignment_from_json(const F& field, const json& j, const std::string& path = "") {
    auto ms = matrix_list_from_json(field, member(j, "matrices", path), join(path, "matrices"));
    try {
        Assignment<F> a(std::move(ms));
        if (j.contains("dim") && positive_int(j["dim"], join(path, "dim")) != a.dim())
            throw ParseError(join(path, "dim"), "dim disagrees with the matrices");
        return a;
    } catch (const InvalidArgument& e) {
        throw ParseError(join(path, "matrices"), e.what());
    }
}

/// Pairs come either as {"pairs": [[A, B], ...]} or as an assignment ordered
/// a_1..a_n, b_1..b_n (the witness output).
template <ExactField F>
std::vector<MatrixPair<F>> pairs_from_json(const F& field, const json& j, const std::string& path = "") {
    if (j.is_object() && j.contains("pairs")) {
        const auto ppath = join(path, "pairs");
        const auto& list = array(j["pairs"], ppath);
        if (list.empty()) throw ParseError(ppath, "expected at least one pair");
        std::vector<MatrixPair<F>> out;
        for (std::size_t k = 0; k < list.size(); ++k) {
            const auto p = join(ppath, k);
            if (!list[k].is_array() || list[k].size() != 2) throw ParseError(p, "expected [a, b]");
            out.emplace_back(matrix_from_json(field, list[k][0], join(p, 0)), matrix_from_json(field, list[k][1], join(p, 1)));
        }
        return out;
    }
    auto a = assignment_from_json(field, j, path);
    try {
        return pairs_from_assignment(a);
    } catch (const InvalidArgument& e) {
        throw ParseError(join(path, "matrices"), e.what());
    }
}

// ---------------------------------------------------------------- certificates

template <ExactField F>
json certificate_to_json(const LowerBoundCertificate<F>& c) {
    json gram = json::array();
    for (std::size_t i = 0; i < c.gram.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < c.gram.cols(); ++j) row.push_back(scalar_to_json(c.field, c.gram(i, j)));
        gram.push_back(row);
    }
    json z = json::array();
    for (const auto& zi : c.z) z.push_back(matrix_to_json(zi));
    return {{"field", c.field.spec().to_string()},
            {"n", c.n},
            {"r", c.r},
            {"v", vector_to_json(c.v)},
            {"alpha", vector_to_json(c.alpha)},
            {"z", z},
            {"gram", gram},
            {"image_rank", c.image_rank},
            {"bound", c.bound}};
}

template <ExactField F>
LowerBoundCertificate<F> certificate_from_json(const F& field, const json& j, const std::string& path = "") {
    auto spec = field_from_json(member(j, "field", path), join(path, "field"));
    if (!(spec == field.spec())) throw ParseError(join(path, "field"), "certificate field differs from " + field.spec().to_string());
    const auto gpath = join(path, "gram");
    const auto& rows = array(member(j, "gram", path), gpath);
    if (rows.empty()) throw ParseError(gpath, "expected a non-empty square array");
    std::vector<typename F::value_type> entries;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto rpath = join(gpath, i);
        if (!rows[i].is_array() || rows[i].size() != rows.size()) throw ParseError(rpath, "gram must be square");
        for (std::size_t k = 0; k < rows.size(); ++k) entries.push_back(scalar_from_json(field, rows[i][k], join(rpath, k)));
    }
    return {field,
            positive_int(member(j, "n", path), join(path, "n")),
            positive_int(member(j, "r", path), join(path, "r")),
            vector_from_json(field, member(j, "v", path), join(path, "v"), false),
            vector_from_json(field, member(j, "alpha", path), join(path, "alpha"), true),
            matrix_list_from_json(field, member(j, "z", path), join(path, "z")),
            Matrix<F>(field, rows.size(), rows.size(), std::move(entries)),
            positive_int(member(j, "image_rank", path), join(path, "image_rank"), true),
            positive_int(member(j, "bound", path), join(path, "bound"), true)};
}

inline json verification_to_json(const VerificationResult& v) {
    json reasons = json::array();
    for (const auto& r : v.rejections) reasons.push_back({{"code", reason_code(r.reason)}, {"detail", r.detail}});
    return {{"valid", v.valid()}, {"reasons", reasons}};
}

// ---------------------------------------------------------------- search

inline json search_report_to_json(const SearchReport& rep, unsigned jobs) {
    json levels = json::array();
    for (const auto& l : rep.levels) levels.push_back({{"r", l.r}, {"method", to_string(l.method)}, {"nodes", l.nodes}});
    json out = {{"graph", graph_to_json(rep.graph)},
                {"field", rep.field.to_string()},
                {"mode", to_string(rep.mode)},
                {"status", to_string(rep.status)},
                {"lower", rep.lower},
                {"upper", rep.upper ? json(*rep.upper) : json(nullptr)},
                {"witness", rep.witness ? assignment_to_json(*rep.witness) : json(nullptr)},
                {"witness_source", rep.witness ? (rep.witness_from_hint ? "hint" : "search") : "none"},
                {"levels", levels},
                {"nodes_explored", rep.nodes_explored},
                {"budget", rep.budget},
                {"jobs", jobs},
                {"witness_deterministic", true}};
    return out;
}

// ---------------------------------------------------------------- modules and counting

inline ModuleSpec module_from_json(const json& j, const std::string& path = "") {
    auto spec = field_from_json(member(j, "field", path), join(path, "field"));
    if (spec.is_rationals()) throw ParseError(join(path, "field"), "module splitting needs a prime field");
    PrimeField f(spec.characteristic());
    auto gens = matrix_list_from_json(f, member(j, "generators", path), join(path, "generators"));
    try {
        ModuleSpec m(f, std::move(gens));
        if (j.contains("dim") && positive_int(j["dim"], join(path, "dim")) != m.dim())
            throw ParseError(join(path, "dim"), "dim disagrees with the generators");
        return m;
    } catch (const InvalidArgument& e) {
        throw ParseError(join(path, "generators"), e.what());
    }
}

inline json module_to_json(const ModuleSpec& m) {
    json gens = json::array();
    for (const auto& g : m.generators()) gens.push_back(matrix_to_json(g));
    return {{"field", m.field().spec().to_string()}, {"dim", m.dim()}, {"generators", gens}};
}

inline json composition_to_json(const CompositionReport& rep, bool triangularizable) {
    return {{"factor_dims", rep.factor_dims},
            {"series", rep.series},
            {"flag_basis", matrix_to_json(rep.flag_basis)},
            {"triangularizable", triangularizable},
            {"base_field_only", rep.base_field_only}};
}

inline std::vector<std::vector<std::uint64_t>> dims_from_json(const json& j, const std::string& path = "") {
    const json& table = (j.is_object() && j.contains("dims")) ? j["dims"] : j;
    const auto tpath = (j.is_object() && j.contains("dims")) ? join(path, "dims") : path;
    array(table, tpath);
    std::vector<std::vector<std::uint64_t>> out;
    for (std::size_t r = 0; r < table.size(); ++r) {
        const auto rpath = join(tpath, r);
        array(table[r], rpath);
        std::vector<std::uint64_t> row;
        for (std::size_t c = 0; c < table[r].size(); ++c) row.push_back(positive_int(table[r][c], join(rpath, c)));
        out.push_back(std::move(row));
    }
    return out;
}

inline json count_check_to_json(const CountCheck& c) {
    return {{"verdict", to_string(c.verdict)},
            {"t", c.t},
            {"n", c.n},
            {"sets", c.sets},
            {"uncovered_columns", c.uncovered_columns},
            {"chain",
             {{"sum_of_products", c.sum_of_products.get_str()},
              {"sum_of_powers", c.sum_of_powers.get_str()},
              {"sum_of_twice_sizes", c.sum_of_twice_sizes.get_str()},
              {"two_n", c.two_n.get_str()}}},
            {"holds",
             {{"products_ge_powers", c.products_ge_powers},
              {"powers_ge_twice", c.powers_ge_twice},
              {"twice_ge_two_n", c.twice_ge_two_n}}}};
}

}  // namespace commrep::io
