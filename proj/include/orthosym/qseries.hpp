#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "orthosym/errors.hpp"
#include "orthosym/rational.hpp"

namespace orthosym {

namespace detail {

// Variable 0 (q) and, for three variables, variable 2 (q') are truncated and
// carry the exponent denominator. The middle variable (zeta) is neither.
template <std::size_t Vars>
constexpr std::array<bool, Vars> truncated_vars() {
    std::array<bool, Vars> t{};
    t[0] = true;
    if constexpr (Vars == 3) t[2] = true;
    return t;
}

}  // namespace detail

/// Truncated Fourier series with exact rational coefficients in one, two or
/// three exponent variables. Exponents of truncated variables are stored
/// scaled by `den` (1 or 2); a term is kept only if every truncated exponent
/// is <= its truncation bound, and every coefficient at such an exponent is
/// exact.
template <std::size_t Vars>
class Series {
public:
    using Key = std::array<std::int64_t, Vars>;
    static constexpr std::array<bool, Vars> kTruncated = detail::truncated_vars<Vars>();

    Series() : Series(1, {}) {}

    /// `trunc[i]` is the inclusive bound on the true exponent of variable i;
    /// entries for untruncated variables are ignored.
    Series(int den, std::array<Rational, Vars> trunc) : den_(den), trunc_(std::move(trunc)) {
        if (den_ != 1 && den_ != 2) throw Error(ErrorKind::InvalidArgument, "exponent denominator must be 1 or 2");
        for (std::size_t i = 0; i < Vars; ++i)
            if (!kTruncated[i]) trunc_[i] = 0;
    }

    int den() const { return den_; }
    const Rational& trunc(std::size_t var) const { return trunc_[var]; }
    const std::array<Rational, Vars>& truncs() const { return trunc_; }
    const std::map<Key, Rational>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    /// True exponent of variable `var` for a stored key.
    Rational exponent(const Key& key, std::size_t var) const {
        return kTruncated[var] ? make_rational(key[var], den_) : Rational(key[var]);
    }

    bool within_trunc(const Key& key) const {
        for (std::size_t i = 0; i < Vars; ++i)
            if (kTruncated[i] && exponent(key, i) > trunc_[i]) return false;
        return true;
    }

    /// Coefficient at a scaled key; zero when absent.
    Rational coeff(const Key& key) const {
        auto it = coeffs_.find(key);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    /// Coefficient at true exponents. Throws InsufficientTruncation if the
    /// exponent lies beyond the truncation.
    Rational at(const std::array<Rational, Vars>& exps) const {
        Key key{};
        for (std::size_t i = 0; i < Vars; ++i) {
            if (kTruncated[i] && exps[i] > trunc_[i])
                throw Error(ErrorKind::InsufficientTruncation, "coefficient requested beyond truncation");
            Rational scaled = kTruncated[i] ? exps[i] * den_ : exps[i];
            if (scaled.get_den() != 1) return Rational(0);
            key[i] = scaled.get_num().get_si();
        }
        return coeff(key);
    }

    /// Sets a coefficient; zero removes it. Keys beyond the truncation are
    /// rejected.
    void set(const Key& key, const Rational& value) {
        if (!within_trunc(key)) throw Error(ErrorKind::InvalidArgument, "term lies beyond the truncation");
        if (value == 0)
            coeffs_.erase(key);
        else
            coeffs_[key] = value;
    }

    void add_to(const Key& key, const Rational& value) {
        if (value == 0 || !within_trunc(key)) return;
        auto [it, inserted] = coeffs_.try_emplace(key, value);
        if (!inserted) {
            it->second += value;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    /// Smallest true exponent of a truncated variable over the whole series:
    /// stored terms, and trunc for the unknown tail.
    Rational min_exp(std::size_t var) const {
        Rational best = trunc_[var];
        for (const auto& [key, value] : coeffs_) best = std::min(best, exponent(key, var));
        return best;
    }

    /// Same series on a finer exponent grid.
    Series with_den(int new_den) const {
        if (new_den % den_ != 0) throw Error(ErrorKind::InvalidArgument, "cannot coarsen the exponent grid");
        const std::int64_t f = new_den / den_;
        Series out(new_den, trunc_);
        for (const auto& [key, value] : coeffs_) {
            Key k = key;
            for (std::size_t i = 0; i < Vars; ++i)
                if (kTruncated[i]) k[i] *= f;
            out.coeffs_.emplace(k, value);
        }
        return out;
    }

    /// Moves to den = 1 when every stored exponent is integral.
    Series normalized() const {
        if (den_ == 1) return *this;
        for (const auto& [key, value] : coeffs_)
            for (std::size_t i = 0; i < Vars; ++i)
                if (kTruncated[i] && key[i] % den_ != 0) return *this;
        Series out(1, trunc_);
        for (const auto& [key, value] : coeffs_) {
            Key k = key;
            for (std::size_t i = 0; i < Vars; ++i)
                if (kTruncated[i]) k[i] /= den_;
            out.coeffs_.emplace(k, value);
        }
        return out;
    }

    /// Drops terms above a (smaller) truncation.
    Series truncated(const std::array<Rational, Vars>& trunc) const {
        std::array<Rational, Vars> t = trunc_;
        for (std::size_t i = 0; i < Vars; ++i)
            if (kTruncated[i]) t[i] = std::min(t[i], trunc[i]);
        Series out(den_, t);
        for (const auto& [key, value] : coeffs_)
            if (out.within_trunc(key)) out.coeffs_.emplace(key, value);
        return out;
    }

    Series scaled(const Rational& factor) const {
        Series out(den_, trunc_);
        if (factor == 0) return out;
        for (const auto& [key, value] : coeffs_) out.coeffs_.emplace(key, value * factor);
        return out;
    }

    Series operator-() const { return scaled(Rational(-1)); }

    friend Series operator+(const Series& a, const Series& b) { return combine(a, b, Rational(1)); }
    friend Series operator-(const Series& a, const Series& b) { return combine(a, b, Rational(-1)); }

    /// Exact convolution. For each truncated variable the output is valid
    /// through min(a.trunc + b.min_exp, b.trunc + a.min_exp).
    friend Series operator*(const Series& a, const Series& b) {
        const int den = std::lcm(a.den_, b.den_);
        if (den > 2) throw Error(ErrorKind::InvalidArgument, "exponent denominator would exceed 2");
        const Series x = a.with_den(den);
        const Series y = b.with_den(den);
        std::array<Rational, Vars> trunc{};
        for (std::size_t i = 0; i < Vars; ++i) {
            if (!kTruncated[i]) continue;
            trunc[i] = std::min(x.trunc_[i] + y.min_exp(i), y.trunc_[i] + x.min_exp(i));
            if (trunc[i] < 0) throw Error(ErrorKind::TruncationUnderflow, "product has no certified coefficients");
        }
        Series out(den, trunc);
        for (const auto& [ka, va] : x.coeffs_) {
            for (const auto& [kb, vb] : y.coeffs_) {
                Key k{};
                for (std::size_t i = 0; i < Vars; ++i) k[i] = ka[i] + kb[i];
                if (!out.within_trunc(k)) continue;
                out.add_to(k, va * vb);
            }
        }
        return out;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.den_ == b.den_ && a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
    }

private:
    static Series combine(const Series& a, const Series& b, const Rational& sign) {
        const int den = std::lcm(a.den_, b.den_);
        const Series x = a.with_den(den);
        const Series y = b.with_den(den);
        std::array<Rational, Vars> trunc{};
        for (std::size_t i = 0; i < Vars; ++i)
            if (kTruncated[i]) trunc[i] = std::min(x.trunc_[i], y.trunc_[i]);
        Series out(den, trunc);
        for (const auto& [k, v] : x.coeffs_) out.add_to(k, v);
        for (const auto& [k, v] : y.coeffs_) out.add_to(k, sign * v);
        return out;
    }

    int den_;
    std::array<Rational, Vars> trunc_;
    std::map<Key, Rational> coeffs_;
};

using QSeries = Series<1>;
using JacobiCoeffs = Series<2>;
using SiegelCoeffs = Series<3>;

/// Index-1 (or general index) Jacobi form expansion sum c(n, r) q^n zeta^r.
struct JacobiSeries {
    int weight = 0;
    int index = 1;
    JacobiCoeffs coeffs;

    Rational c(std::int64_t n, std::int64_t r) const { return coeffs.coeff({n * coeffs.den(), r}); }
    Rational n_trunc() const { return coeffs.trunc(0); }
};

/// Siegel expansion sum A(n, r, m) q^n zeta^r q'^m.
struct SiegelSeries {
    int weight = 0;
    SiegelCoeffs coeffs;

    Rational A(std::int64_t n, std::int64_t r, std::int64_t m) const {
        return coeffs.coeff({n * coeffs.den(), r, m * coeffs.den()});
    }
    Rational n_trunc() const { return coeffs.trunc(0); }
    Rational m_trunc() const { return coeffs.trunc(2); }
};

/// Treats a one-variable series as a Jacobi series supported on r = 0.
JacobiCoeffs as_jacobi(const QSeries& f);

/// Substitution acting on one variable of a Siegel series.
///   Tau / TauPrime: variable -> (a * variable + b) / d
///   Z: z -> a * z (b, d ignored)
struct SiegelSubstitution {
    enum class Var { Tau, Z, TauPrime };
    Var var = Var::Tau;
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t d = 1;
};

/// Remaps exponents; tau -> (a tau + b)/d multiplies the coefficient at
/// exponent n by e(n b / d). Throws IrrationalPhase when that phase is not
/// +-1 on a nonzero coefficient.
SiegelCoeffs substitute_siegel(const SiegelCoeffs& F, const SiegelSubstitution& op);

/// Exchanges the roles of q and q' (n <-> m).
SiegelCoeffs swap_nm(const SiegelCoeffs& F);

/// {"den": d, "trunc": [...], "terms": [{"exp": [scaled exps], "num": "..", "den": ".."}]}
template <std::size_t Vars>
nlohmann::json to_json(const Series<Vars>& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, value] : s.terms()) {
        terms.push_back({{"exp", key}, {"num", value.get_num().get_str()}, {"den", value.get_den().get_str()}});
    }
    nlohmann::json trunc = nlohmann::json::array();
    for (std::size_t i = 0; i < Vars; ++i)
        trunc.push_back(Series<Vars>::kTruncated[i] ? nlohmann::json(to_string(s.trunc(i))) : nlohmann::json(nullptr));
    return {{"den", s.den()}, {"trunc", trunc}, {"terms", terms}};
}

template <std::size_t Vars>
Series<Vars> series_from_json(const nlohmann::json& j) {
    std::array<Rational, Vars> trunc{};
    for (std::size_t i = 0; i < Vars; ++i)
        if (Series<Vars>::kTruncated[i]) trunc[i] = parse_rational(j.at("trunc").at(i).get<std::string>());
    Series<Vars> out(j.at("den").get<int>(), trunc);
    for (const auto& t : j.at("terms")) {
        typename Series<Vars>::Key key{};
        for (std::size_t i = 0; i < Vars; ++i) key[i] = t.at("exp").at(i).get<std::int64_t>();
        Rational v(Integer(t.at("num").get<std::string>()), Integer(t.at("den").get<std::string>()));
        v.canonicalize();
        out.set(key, v);
    }
    return out;
}

}  // namespace orthosym
