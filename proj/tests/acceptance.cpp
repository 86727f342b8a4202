// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Usage: acceptance <path-to-commrep-binary>

#include <commrep/commrep.hpp>
#include <commrep/json_io.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace commrep;
using commrep::io::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

using QMatrix = Matrix<Rationals>;

// ----------------------------------------------------------------------------
// 1. sharp witnesses for n <= 50

Outcome sharp_witness_validity() {
    Outcome o;
    const Rationals q;
    for (const char* lam_text : {"2", "-1", "1/2"}) {
        const auto lambda = q.parse(lam_text);
        for (std::size_t n = 1; n <= 50; ++n) {
            auto w = sharp_witness(n, lambda, q);
            if (!realizes(w, matching_graph(n))) o.fail("n = " + std::to_string(n) + ", lambda = " + lam_text + " does not realize");
            const auto& m = w.matrices();
            for (std::size_t i = 0; i < n; ++i)
                if (!(commutator(m[i], m[n + i]) == elementary_matrix(n + 1, 1, i + 2, q).scaled(-lambda)))
                    o.fail("[a_" + std::to_string(i + 1) + ", b_" + std::to_string(i + 1) + "] wrong at n = " + std::to_string(n));
        }
    }
    return o;
}

// ----------------------------------------------------------------------------
// 2. certificates are sharp on the witnesses

Outcome certificate_sharpness() {
    Outcome o;
    const Rationals q;
    for (std::size_t n = 1; n <= 20; ++n) {
        auto w = sharp_witness(n, q.from_int(2), q);
        auto pairs = pairs_from_assignment(w);
        auto cert = build_certificate(pairs);
        if (cert.bound != n + 1 || cert.r != n + 1) o.fail("bound " + std::to_string(cert.bound) + " at n = " + std::to_string(n));
        if (!verify_certificate(cert, pairs)) o.fail("verification failed at n = " + std::to_string(n));
        std::vector<QMatrix> fam{identity(n + 1, q)};
        fam.insert(fam.end(), w.matrices().begin(), w.matrices().end());
        if (span_rank(fam) != 2 * n + 1) o.fail("span rank wrong at n = " + std::to_string(n));
    }
    return o;
}

// ----------------------------------------------------------------------------
// 3. single-field corruptions are rejected with the matching reason

template <ExactField F>
typename F::value_type random_nonzero(std::mt19937_64& rng, const F& f) {
    for (;;) {
        auto x = f.from_int(static_cast<long>(rng() % 19) - 9);
        if (!f.is_zero(x)) return x;
    }
}

template <ExactField F>
bool corrupt_and_check(std::mt19937_64& rng, const F& f, std::size_t n, std::string& detail) {
    auto w = sharp_witness(n, random_nonzero(rng, f), f);
    auto pairs = pairs_from_assignment(w);
    auto cert = build_certificate(pairs);
    if (!verify_certificate(cert, pairs)) {
        detail = "unperturbed certificate rejected";
        return false;
    }
    auto c = cert;
    const auto r = c.r;
    RejectReason expect{};
    auto nonunit = [&] {
        for (;;) {
            auto x = random_nonzero(rng, f);
            if (!f.equal(x, f.one())) return x;
        }
    };
    switch (rng() % 11) {
        case 0:
            c.v = Matrix<F>(f, r, 1);
            expect = RejectReason::AlphaVZero;
            break;
        case 1:
            c.v = c.v.scaled(nonunit());
            expect = RejectReason::GramMismatch;
            break;
        case 2:
            c.alpha = c.alpha.scaled(nonunit());
            expect = RejectReason::GramMismatch;
            break;
        case 3:
            c.alpha = Matrix<F>(f, 1, r);
            expect = RejectReason::AlphaVZero;
            break;
        case 4: {
            const auto i = rng() % c.gram.rows(), j = rng() % c.gram.cols();
            c.gram(i, j) = f.add(c.gram(i, j), random_nonzero(rng, f));
            expect = RejectReason::GramMismatch;
            break;
        }
        case 5:
            c.image_rank = rng() % 2 ? c.image_rank + 1 : c.image_rank - 1;
            expect = RejectReason::ImageRankMismatch;
            break;
        case 6:
            c.bound = c.bound + 1 + rng() % 3;
            expect = RejectReason::BoundMismatch;
            break;
        case 7:
            c.n = c.n + 1 + rng() % 2;
            expect = RejectReason::NMismatch;
            break;
        case 8:
            c.r = c.r + 1;
            expect = RejectReason::RMismatch;
            break;
        case 9: {
            auto& z = c.z[rng() % c.z.size()];
            const auto i = rng() % r, j = rng() % r;
            z(i, j) = f.add(z(i, j), random_nonzero(rng, f));
            expect = RejectReason::ZMismatch;
            break;
        }
        default: {
            Matrix<F> longer(f, r + 1, 1);
            for (std::size_t i = 0; i < r; ++i) longer(i, 0) = c.v(i, 0);
            c.v = longer;
            expect = RejectReason::ShapeMismatch;
            break;
        }
    }
    auto res = verify_certificate(c, pairs);
    if (res.valid() || !res.has(expect)) {
        detail = std::string("expected ") + reason_code(expect) + " on " + f.spec().to_string() + " n = " + std::to_string(n);
        return false;
    }
    return true;
}

Outcome certificate_fuzzing() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    const Rationals q;
    const PrimeField f(101);
    int rejected = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        std::string why;
        bool ok = trial % 2 ? corrupt_and_check(rng, q, n, why) : corrupt_and_check(rng, f, n, why);
        if (ok)
            ++rejected;
        else
            o.fail("trial " + std::to_string(trial) + ": " + why);
    }
    if (o.pass) o.detail = std::to_string(rejected) + "/1000 corruptions rejected with the expected reason";
    return o;
}

// ----------------------------------------------------------------------------
// 4. exhaustive search agrees with r >= n + 1

Outcome search_oracle() {
    Outcome o;
    const PrimeField f2(2);
    SearchOptions opts;
    opts.budget = 100'000'000;
    auto one = min_realization_dim(matching_graph(1), f2, opts);
    if (one.status != SearchStatus::Exact || one.lower != 2) o.fail("matching_graph(1) is not exactly 2");

    opts.hint = sharp_witness(2, f2.one(), f2);
    auto two = min_realization_dim(matching_graph(2), f2, opts);
    if (two.status != SearchStatus::Exact || two.lower != 3) o.fail("matching_graph(2) is not exactly 3");
    if (two.levels.size() != 2) o.fail("expected two excluded levels");
    for (const auto& l : two.levels)
        if (l.method != LevelOutcome::Method::Exhaustive) o.fail("r = " + std::to_string(l.r) + " not excluded exhaustively");
    if (o.pass) o.detail = std::to_string(one.nodes_explored + two.nodes_explored) + " nodes";
    return o;
}

// ----------------------------------------------------------------------------
// 5. block embedding of three two-dimensional factors

Outcome block_embedding_shape() {
    Outcome o;
    const Rationals q;
    auto m = [&](long a, long b, long c, long d) { return QMatrix(q, 2, 2, {a, b, c, d}); };
    std::vector<std::vector<QMatrix>> factors{
        {m(1, 1, 0, 1), m(1, 0, 1, 1)},
        {m(0, -1, 1, 0), m(1, 1, 0, 1)},
        {m(2, 0, 0, 1), m(1, 3, 0, 1)},
    };
    auto images = product_block_embedding(factors);
    if (images.size() != 6) o.fail("expected 6 images");
    for (const auto& x : images)
        if (x.rows() != 6 || x.cols() != 6) o.fail("image is " + x.shape());
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i / 2 != j / 2 && !commutator(images[i], images[j]).is_zero())
                o.fail("images " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");

    std::mt19937_64 rng(5);
    for (int word = 0; word < 100; ++word) {
        const std::size_t len = 1 + rng() % 12;
        auto product = identity(6, q);
        std::vector<QMatrix> local(3, identity(2, q));
        for (std::size_t k = 0; k < len; ++k) {
            const auto letter = rng() % 6;
            product = product * images[letter];
            local[letter / 2] = local[letter / 2] * factors[letter / 2][letter % 2];
        }
        if (!(product == block_diagonal(std::span<const QMatrix>(local))))
            o.fail("word " + std::to_string(word) + " is not evaluated factor-wise");
    }
    return o;
}

// ----------------------------------------------------------------------------
// 6. composition factors

Outcome composition_machinery() {
    Outcome o;
    const PrimeField f2(2);
    auto gm = [&](std::vector<std::uint64_t> e, std::size_t d) { return FpMatrix(f2, d, d, std::move(e)); };
    std::vector<FpMatrix> s3{gm({0, 1, 0, 1, 0, 0, 0, 0, 1}, 3), gm({0, 0, 1, 1, 0, 0, 0, 1, 0}, 3)};
    auto rep = composition_factor_dims(ModuleSpec(f2, s3));
    if (rep.factor_dims != std::vector<std::size_t>{1, 2}) o.fail("S_3 module factors are not {1, 2}");
    const auto inv = inverse(rep.flag_basis);
    for (const auto& g : s3)
        if (!is_block_upper_triangular(inv * g * rep.flag_basis, rep.factor_dims)) o.fail("S_3 flag basis invalid");

    ModuleSpec unipotent(f2, {gm({1, 1, 0, 1}, 2)});
    if (composition_factor_dims(unipotent).factor_dims != std::vector<std::size_t>{1, 1}) o.fail("unipotent factors are not {1, 1}");
    if (!is_triangularizable(unipotent)) o.fail("unipotent module not triangularizable");

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        FpMatrix c(f2, 3, 3);
        do {
            for (std::size_t i = 0; i < 9; ++i) c(i / 3, i % 3) = rng() % 2;
        } while (!is_invertible(c));
        const auto ci = inverse(c);
        std::vector<FpMatrix> conj;
        for (const auto& g : s3) conj.push_back(ci * g * c);
        auto dims = composition_factor_dims(ModuleSpec(f2, conj)).factor_dims;
        std::sort(dims.begin(), dims.end());
        if (dims != std::vector<std::size_t>{1, 2}) o.fail("factor dims change under basis change " + std::to_string(trial));
    }
    return o;
}

// ----------------------------------------------------------------------------
// 7. counting chain

Outcome counting_chain() {
    Outcome o;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t t = 1 + rng() % 6, n = 1 + rng() % 8;
        std::vector<std::vector<std::uint64_t>> dims(t, std::vector<std::uint64_t>(n));
        for (auto& row : dims)
            for (auto& x : row) x = rng() % 2 ? 1 : 1 + rng() % 30;
        for (std::size_t i = 0; i < n; ++i)
            if (std::all_of(dims.begin(), dims.end(), [&](const auto& row) { return row[i] == 1; })) dims[rng() % t][i] = 2 + rng() % 5;

        mpz_class products = 0, powers = 0, twice = 0;
        for (const auto& row : dims) {
            mpz_class p = 1;
            unsigned long s = 0;
            for (auto x : row) {
                p *= static_cast<unsigned long>(x);
                s += x >= 2;
            }
            products += p;
            powers += mpz_class(1) << static_cast<mp_bitcnt_t>(s);
            twice += 2 * s;
        }
        auto res = theorem3_count_check(dims);
        if (res.verdict != CountCheck::Verdict::Satisfied) o.fail("valid table " + std::to_string(trial) + " flagged");
        if (res.sum_of_products != products || res.sum_of_powers != powers || res.sum_of_twice_sizes != twice)
            o.fail("chain sums differ on table " + std::to_string(trial));
        if (!(products >= powers && powers >= twice && twice >= 2 * static_cast<unsigned long>(n)))
            o.fail("chain fails on table " + std::to_string(trial));

        auto bad = dims;
        const auto col = rng() % n;
        for (auto& row : bad) row[col] = 1;
        auto flagged = theorem3_count_check(bad);
        if (flagged.verdict != CountCheck::Verdict::PreconditionFailed ||
            std::find(flagged.uncovered_columns.begin(), flagged.uncovered_columns.end(), col + 1) == flagged.uncovered_columns.end())
            o.fail("all-ones column " + std::to_string(col + 1) + " not flagged on table " + std::to_string(trial));
    }
    return o;
}

// ----------------------------------------------------------------------------
// 8. every subcommand is deterministic

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + command);
    char buf[4096];
    while (auto k = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
    ::pclose(pipe);
    return out;
}

Outcome determinism(const std::string& binary) {
    Outcome o;
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / ("commrep_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        auto p = (dir / name).string();
        std::ofstream(p) << text;
        return "'" + p + "'";
    };
    const std::string bin = "'" + binary + "'";

    const auto witness_q = capture(bin + " witness --n 3 --lambda 2 --field Q");
    const auto witness_f2 = capture(bin + " witness --n 2 --lambda 1 --field Fp:2");
    const auto wq = write("wq.json", witness_q);
    const auto wf = write("wf.json", witness_f2);
    const auto cert = write("cert.json", capture(bin + " certify --input " + wq));
    const auto graph = write("graph.json", io::graph_to_json(matching_graph(2)).dump());
    const auto path = write("path.json", io::graph_to_json(CommGraph(4, {{1, 2}, {2, 3}, {3, 4}})).dump());
    const auto module = write("module.json", R"({"field": "Fp:2", "generators": [
        {"field": "Fp:2", "rows": 3, "cols": 3, "entries": ["0","1","0","1","0","0","0","0","1"]},
        {"field": "Fp:2", "rows": 3, "cols": 3, "entries": ["0","0","1","1","0","0","0","1","0"]}]})");
    const auto dims = write("dims.json", "[[1, 2, 3], [2, 1, 1]]");

    const std::vector<std::string> commands{
        "witness --n 3 --lambda 2 --field Q",
        "verify-graph --graph " + graph + " --assignment " + wf,
        "certify --input " + wq,
        "verify-cert --cert " + cert + " --input " + wq,
        "search --graph " + graph + " --field Fp:2 --rmax 3 --hint " + wf + " --jobs 4",
        "search --graph " + path + " --field Fp:2 --jobs 4",
        "split --module " + module,
        "count-check --dims " + dims,
        "selftest",
    };
    for (const auto& cmd : commands) {
        const auto a = capture(bin + " " + cmd), b = capture(bin + " " + cmd);
        if (a.empty()) o.fail("no output from: " + cmd);
        if (a != b) o.fail("output differs between runs of: " + cmd);
        if (!json::accept(a)) o.fail("output is not one JSON document: " + cmd);
    }

    const auto seq = json::parse(capture(bin + " search --graph " + path + " --field Fp:2 --jobs 1"));
    const auto par = json::parse(capture(bin + " search --graph " + path + " --field Fp:2 --jobs 4"));
    for (const char* key : {"status", "lower", "upper", "witness", "nodes_explored"})
        if (seq[key] != par[key]) o.fail(std::string("search field '") + key + "' differs between --jobs 1 and --jobs 4");

    fs::remove_all(dir);
    if (o.pass) o.detail = std::to_string(commands.size()) + " invocations repeated byte-identically";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <path-to-commrep>\n";
        return 2;
    }
    const std::string binary = argv[1];

    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "sharp witness validity, n <= 50", 10, sharp_witness_validity},
        {2, "certificate sharpness, n <= 20", 60, certificate_sharpness},
        {3, "certificate soundness fuzzing", 30, certificate_fuzzing},
        {4, "search agrees with the analytic bound", 120, search_oracle},
        {5, "block embedding shape", 5, block_embedding_shape},
        {6, "composition machinery", 30, composition_machinery},
        {7, "counting chain", 5, counting_chain},
        {8, "determinism", 120, [&] { return determinism(binary); }},
    };

    bool all = true;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) o.fail("took longer than " + std::to_string(static_cast<int>(c.limit_seconds)) + " s");
        all = all && o.pass;
        std::cout << "AC" << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << std::fixed
                  << std::setprecision(2) << secs << " s)";
        if (!o.detail.empty()) std::cout << "  " << o.detail;
        std::cout << '\n';
    }
    return all ? 0 : 1;
}
