#pragma once

#include <commrep/errors.hpp>

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace commrep {

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline mpz_class parse_integer(std::string_view s) {
    if (!is_decimal_integer(s)) throw InvalidArgument("not a decimal integer: '" + std::string(s) + "'");
    if (s.front() == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

}  // namespace detail

/// Runtime description of the ground field: the rationals or a prime field F_p.
class FieldSpec {
public:
    enum class Kind { Rationals, PrimeField };

    static FieldSpec rationals() { return FieldSpec(Kind::Rationals, 0); }

    static FieldSpec prime(std::uint64_t p) {
        if (!detail::is_prime(p)) throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
        if (p >= (std::uint64_t{1} << 32)) throw InvalidArgument("characteristic must be below 2^32");
        return FieldSpec(Kind::PrimeField, p);
    }

    /// Accepts "Q" or "Fp:<prime>".
    static FieldSpec parse(std::string_view text) {
        if (text == "Q") return rationals();
        constexpr std::string_view prefix = "Fp:";
        if (text.substr(0, prefix.size()) == prefix) {
            auto digits = text.substr(prefix.size());
            if (digits.empty() || digits.size() > 10 || digits.front() == '-' || digits.front() == '+' ||
                !detail::is_decimal_integer(digits))
                throw InvalidArgument("bad characteristic in field '" + std::string(text) + "'");
            return prime(std::stoull(std::string(digits)));
        }
        throw InvalidArgument("unknown field '" + std::string(text) + "' (expected Q or Fp:<prime>)");
    }

    Kind kind() const noexcept { return kind_; }
    bool is_rationals() const noexcept { return kind_ == Kind::Rationals; }
    /// 0 for the rationals.
    std::uint64_t characteristic() const noexcept { return p_; }

    std::string to_string() const { return is_rationals() ? std::string("Q") : "Fp:" + std::to_string(p_); }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

private:
    FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::uint64_t p_;
};

/// The rational numbers with GMP fractions. mpq_class keeps values canonical
/// (lowest terms, positive denominator) after every arithmetic operation.
class Rationals {
public:
    using value_type = mpq_class;

    FieldSpec spec() const { return FieldSpec::rationals(); }

    value_type zero() const { return value_type(0); }
    value_type one() const { return value_type(1); }
    value_type from_int(long v) const { return value_type(v); }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const {
        if (sgn(a) == 0) throw InvalidArgument("inverse of zero");
        return 1 / a;
    }
    void add_mul(value_type& acc, const value_type& a, const value_type& b) const {
        if (is_integer(acc) && is_integer(a) && is_integer(b))
            mpz_addmul(acc.get_num_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
        else
            acc += a * b;
    }

    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }

private:
    static bool is_integer(const value_type& a) { return mpz_cmp_ui(a.get_den_mpz_t(), 1) == 0; }

public:

    /// "a", "-a" or "a/b" with decimal integers; b must be nonzero.
    value_type parse(std::string_view s) const {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return value_type(detail::parse_integer(s));
        return make(detail::parse_integer(s.substr(0, slash)), detail::parse_integer(s.substr(slash + 1)));
    }

    value_type make(const mpz_class& num, const mpz_class& den) const {
        if (sgn(den) == 0) throw InvalidArgument("zero denominator");
        value_type q(num, den);
        q.canonicalize();
        return q;
    }

    std::string to_string(const value_type& a) const { return a.get_str(); }

    friend bool operator==(const Rationals&, const Rationals&) = default;
};

/// F_p for a prime p < 2^32. Values are canonical residues in [0, p).
class PrimeField {
public:
    using value_type = std::uint64_t;

    explicit PrimeField(std::uint64_t p) : p_(FieldSpec::prime(p).characteristic()) {}

    FieldSpec spec() const { return FieldSpec::prime(p_); }
    std::uint64_t characteristic() const noexcept { return p_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p_; }
    value_type from_int(long v) const {
        auto m = static_cast<long long>(p_);
        auto r = static_cast<long long>(v) % m;
        return static_cast<value_type>(r < 0 ? r + m : r);
    }

    value_type add(value_type a, value_type b) const {
        auto s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type inv(value_type a) const {
        if (a == 0) throw InvalidArgument("inverse of zero");
        // Fermat: a^(p-2)
        value_type result = 1, base = a, e = p_ - 2;
        while (e > 0) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
    void add_mul(value_type& acc, value_type a, value_type b) const { acc = add(acc, mul(a, b)); }

    bool is_zero(value_type a) const { return a == 0; }
    bool equal(value_type a, value_type b) const { return a == b; }

    /// Integers and fractions are reduced mod p, so "1/2" is the inverse of 2.
    value_type parse(std::string_view s) const {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return reduce(detail::parse_integer(s));
        auto den = reduce(detail::parse_integer(s.substr(slash + 1)));
        if (den == 0) throw InvalidArgument("denominator vanishes mod " + std::to_string(p_));
        return mul(reduce(detail::parse_integer(s.substr(0, slash))), inv(den));
    }

    value_type reduce(const mpz_class& v) const {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
        return static_cast<value_type>(r.get_ui());
    }

    std::string to_string(value_type a) const { return std::to_string(a); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t p_;
};

template <class F>
concept ExactField = requires(const F& f, const typename F::value_type& a) {
    { f.spec() } -> std::convertible_to<FieldSpec>;
    { f.zero() } -> std::convertible_to<typename F::value_type>;
    { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
};

/// Calls fn with the concrete field object described by spec.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
    if (spec.is_rationals()) return std::forward<Fn>(fn)(Rationals{});
    return std::forward<Fn>(fn)(PrimeField(spec.characteristic()));
}

}  // namespace commrep
