#pragma once

// Continued fractions of irrational rotation numbers.
//
// Indexing: q_0 = 1, q_1 = a_1, q_{n+1} = a_{n+1} q_n + q_{n-1} (and p_0 = a_0,
// p_1 = a_0 a_1 + 1). For the golden mean this gives q = 1, 1, 2, 3, 5, ...

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/fixed.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab {

/// How a rotation number was specified. Quadratic surds (P + sqrt(D))/Q and
/// e - 2 can be enclosed to any precision; a decimal carries a fixed
/// certified precision; a rational is accepted only to be rejected.
struct irrational_spec {
    enum class kind { quadratic_surd, e_minus_two, decimal, rational };

    kind k = kind::quadratic_surd;
    big_int P{0}, D{0}, Q{1};
    std::string digits;          // decimal kind: the decimal string
    unsigned precision_bits = 0; // decimal kind: |alpha - digits| <= 2^-precision_bits
    big_rational exact{0};       // rational kind

    static irrational_spec surd(big_int p, big_int d, big_int q) {
        require(q != 0, errc::out_of_range, "surd denominator is zero");
        irrational_spec s;
        s.k = kind::quadratic_surd;
        s.P = std::move(p);
        s.D = std::move(d);
        s.Q = std::move(q);
        require(s.D >= 0, errc::out_of_range, "surd radicand is negative");
        const big_int r = isqrt(s.D);
        if (r * r == s.D) return rational(big_rational(s.P + r, s.Q));
        return s;
    }

    static irrational_spec golden() { return surd(-1, 5, 2); }
    static irrational_spec sqrt2_minus_1() { return surd(-1, 2, 1); }

    static irrational_spec e_minus_2() {
        irrational_spec s;
        s.k = kind::e_minus_two;
        return s;
    }

    static irrational_spec decimal(std::string text, unsigned bits) {
        irrational_spec s;
        s.k = kind::decimal;
        s.digits = std::move(text);
        s.precision_bits = bits;
        s.exact = parse_decimal(s.digits);
        return s;
    }

    static irrational_spec rational(big_rational v) {
        irrational_spec s;
        s.k = kind::rational;
        s.exact = std::move(v);
        return s;
    }

    /// Accepts "golden", "sqrt2-1", "e-2", "surd:P,D,Q", "decimal:<digits>@<bits>"
    /// and "rational:p/q".
    static irrational_spec parse(const std::string& text) {
        if (text == "golden") return golden();
        if (text == "sqrt2-1") return sqrt2_minus_1();
        if (text == "e-2") return e_minus_2();
        const auto colon = text.find(':');
        require(colon != std::string::npos, errc::config_invalid, "unknown rotation number '" + text + "'");
        const std::string head = text.substr(0, colon);
        const std::string body = text.substr(colon + 1);
        try {
            if (head == "surd") {
                const auto c1 = body.find(',');
                const auto c2 = body.find(',', c1 + 1);
                require(c1 != std::string::npos && c2 != std::string::npos, errc::config_invalid, "surd needs P,D,Q");
                return surd(big_int(body.substr(0, c1)), big_int(body.substr(c1 + 1, c2 - c1 - 1)),
                            big_int(body.substr(c2 + 1)));
            }
            if (head == "decimal") {
                const auto at = body.find('@');
                require(at != std::string::npos, errc::config_invalid, "decimal needs <digits>@<bits>");
                return decimal(body.substr(0, at), static_cast<unsigned>(std::stoul(body.substr(at + 1))));
            }
            if (head == "rational") {
                const auto slash = body.find('/');
                require(slash != std::string::npos, errc::config_invalid, "rational needs p/q");
                return rational(big_rational(big_int(body.substr(0, slash)), big_int(body.substr(slash + 1))));
            }
        } catch (const error&) {
            throw;
        } catch (const std::exception& e) {
            fail(errc::config_invalid, "malformed rotation number '" + text + "': " + e.what());
        }
        fail(errc::config_invalid, "unknown rotation number kind '" + head + "'");
    }

    std::string describe() const {
        switch (k) {
        case kind::quadratic_surd: return "surd:" + P.str() + "," + D.str() + "," + Q.str();
        case kind::e_minus_two: return "e-2";
        case kind::decimal: return "decimal:" + digits + "@" + std::to_string(precision_bits);
        case kind::rational: return "rational:" + exact.str();
        }
        return "unknown";
    }

    bool refinable() const { return k == kind::quadratic_surd || k == kind::e_minus_two; }

    /// An interval [lo, hi] containing the number, of width at most 2^-bits
    /// for refinable kinds (decimals are limited by their own precision).
    std::pair<big_rational, big_rational> enclosure(unsigned bits) const {
        switch (k) {
        case kind::quadratic_surd: {
            const big_int s = isqrt(D << (2 * bits));
            const big_rational scale(big_int(1) << bits);
            big_rational lo = (big_rational(P) + big_rational(s) / scale) / big_rational(Q);
            big_rational hi = (big_rational(P) + big_rational(s + 1) / scale) / big_rational(Q);
            if (hi < lo) std::swap(lo, hi);
            return {lo, hi};
        }
        case kind::e_minus_two: {
            // e - 2 = sum_{k>=2} 1/k!; the tail after 1/m! is below 2/(m+1)!.
            big_rational sum(0);
            big_int fact(1);
            unsigned m = 1;
            const big_int target = big_int(1) << (bits + 1);
            while (true) {
                ++m;
                fact *= m;
                sum += big_rational(1, fact);
                if (fact * (m + 1) > target) break;
            }
            return {sum, sum + big_rational(2, fact * (m + 1))};
        }
        case kind::decimal: {
            const big_rational eps(big_int(1), big_int(1) << precision_bits);
            return {exact - eps, exact + eps};
        }
        case kind::rational: return {exact, exact};
        }
        fail(errc::internal, "unknown spec kind");
    }

    static big_rational parse_decimal(const std::string& text) {
        std::string s = text;
        bool negative = false;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
            negative = s[0] == '-';
            s = s.substr(1);
        }
        const auto dot = s.find('.');
        std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
        std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        const auto digit = [](char c) { return c >= '0' && c <= '9'; };
        require(std::all_of(whole.begin(), whole.end(), digit) && std::all_of(frac.begin(), frac.end(), digit),
                errc::config_invalid, "malformed decimal '" + text + "'");
        std::string all = whole + frac;
        const auto nz = all.find_first_not_of('0');
        all = nz == std::string::npos ? "0" : all.substr(nz); // a leading 0 would read as octal
        big_rational v(big_int(all), pow_int(big_int(10), static_cast<unsigned>(frac.size())));
        return negative ? big_rational(-v) : v;
    }
};

struct partial_quotients {
    big_int a0{0};
    std::vector<big_int> terms; // a_1, ..., a_D
    std::string source;

    std::size_t depth() const { return terms.size(); }
};

struct convergent {
    big_int p{0};
    big_int q{1};
    std::size_t index = 0;
};

namespace detail {

enum class expand_status { complete, undecidable, terminated };

/// Expands the continued fraction common to every point of [lo, hi].
inline expand_status expand_interval(big_rational lo, big_rational hi, std::size_t depth, partial_quotients& out) {
    const big_int a0 = floor(lo);
    if (floor(hi) != a0) return expand_status::undecidable;
    out.a0 = a0;
    out.terms.clear();
    lo -= big_rational(a0);
    hi -= big_rational(a0);
    while (out.terms.size() < depth) {
        if (lo == 0) return hi == 0 ? expand_status::terminated : expand_status::undecidable;
        big_rational nlo = big_rational(1) / hi;
        big_rational nhi = big_rational(1) / lo;
        const big_int a = floor(nlo);
        if (floor(nhi) != a) return expand_status::undecidable;
        out.terms.push_back(a);
        lo = nlo - big_rational(a);
        hi = nhi - big_rational(a);
    }
    return expand_status::complete;
}

} // namespace detail

/// First `depth` partial quotients of the number, certified on interval
/// enclosures. Refinable specs double their precision until every floor is
/// decided.
inline partial_quotients cf_expand(const irrational_spec& spec, std::size_t depth) {
    require(depth >= 2, errc::out_of_range, "continued fraction depth must be at least 2");
    if (spec.k == irrational_spec::kind::rational)
        fail(errc::rational_input, "rational number " + spec.exact.str() + " has a terminating expansion");
    partial_quotients pq;
    pq.source = spec.describe();
    unsigned bits = 128;
    while (true) {
        const auto [lo, hi] = spec.enclosure(bits);
        const auto status = detail::expand_interval(lo, hi, depth, pq);
        if (status == detail::expand_status::complete) return pq;
        if (status == detail::expand_status::terminated)
            fail(errc::rational_input, "expansion terminates after " + std::to_string(pq.terms.size()) + " terms");
        if (!spec.refinable()) {
            partial_quotients point;
            if (detail::expand_interval(spec.exact, spec.exact, depth, point) == detail::expand_status::terminated &&
                point.terms.size() <= pq.terms.size() + 1)
                fail(errc::rational_input,
                     "decimal expansion terminates after " + std::to_string(point.terms.size()) + " terms");
            fail(errc::insufficient_precision, "decimal precision of " + std::to_string(spec.precision_bits) +
                                                   " bits certifies only " + std::to_string(pq.terms.size()) +
                                                   " partial quotients");
        }
        require(bits < (1u << 24), errc::insufficient_precision, "enclosure precision limit reached");
        bits *= 2;
    }
}

/// Convergents with indices 0 .. count-1.
inline std::vector<convergent> convergents(const partial_quotients& pq, std::size_t count) {
    require(count >= 1 && count <= pq.depth() + 1, errc::depth_exceeded,
            "requested " + std::to_string(count) + " convergents from depth " + std::to_string(pq.depth()));
    std::vector<convergent> out;
    out.reserve(count);
    big_int p_prev(1), q_prev(0);
    big_int p = pq.a0, q(1);
    out.push_back({p, q, 0});
    for (std::size_t n = 1; n < count; ++n) {
        const big_int& a = pq.terms[n - 1];
        big_int p_next = a * p + p_prev;
        big_int q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        out.push_back({p, q, n});
    }
    return out;
}

/// An irrational angle with its convergents, a 256-bit approximation of
/// frac(alpha) and a rational enclosure of at least 512 bits.
class rotation_number {
public:
    static rotation_number from_spec(const irrational_spec& spec, std::size_t depth = 48) {
        rotation_number r;
        r.spec_ = spec;
        r.pq_ = cf_expand(spec, depth);
        r.conv_ = ergolab::convergents(r.pq_, depth + 1);
        const double qbits = log2_big(r.conv_.back().q);
        unsigned bits = 512;
        while (bits < 2 * qbits + 96) bits *= 2;
        auto [lo, hi] = spec.enclosure(bits);
        const big_rational a0(r.pq_.a0);
        r.lo_ = lo - a0;
        r.hi_ = hi - a0;
        r.value_ = fixed::from_rational(r.lo_);
        const big_rational width = (r.hi_ - r.lo_) * big_rational(big_int(1) << fixed_bits);
        const big_int w = floor(width) + 2;
        require(w < big_int(1) << 60, errc::insufficient_precision,
                "enclosure too wide for a 256-bit angle (decimal precision too low)");
        r.err_ = static_cast<std::uint64_t>(w);
        r.check_invariants();
        return r;
    }

    static rotation_number parse(const std::string& text, std::size_t depth = 48) {
        return from_spec(irrational_spec::parse(text), depth);
    }

    const irrational_spec& spec() const { return spec_; }
    const partial_quotients& quotients() const { return pq_; }
    const std::vector<convergent>& convergents() const { return conv_; }
    std::size_t depth() const { return pq_.depth(); }

    const convergent& convergent_at(std::size_t n) const {
        require(n < conv_.size(), errc::depth_exceeded,
                "convergent " + std::to_string(n) + " beyond cached depth " + std::to_string(pq_.depth()));
        return conv_[n];
    }

    const big_int& q(std::size_t n) const { return convergent_at(n).q; }

    /// frac(alpha) as a 256-bit fraction; |frac(alpha) - value| <= err ulps.
    const fixed_t& value() const { return value_; }
    std::uint64_t err_ulps() const { return err_; }
    circle_point point() const { return {value_, err_}; }

    /// Rational enclosure [lo, hi] of frac(alpha).
    const big_rational& lo() const { return lo_; }
    const big_rational& hi() const { return hi_; }

    double to_double() const { return fixed::to_double(value_); }

    /// frac(x + k alpha) with its accumulated error. Errors past 2^-100 throw.
    circle_point orbit(const circle_point& x, std::uint64_t k) const {
        const boost::multiprecision::uint128_t e =
            boost::multiprecision::uint128_t(err_) * k + x.err;
        require(e < (boost::multiprecision::uint128_t(1) << 63), errc::insufficient_precision,
                "orbit error bound exceeds 2^-193");
        return {x.value + fixed::times(value_, k), static_cast<std::uint64_t>(e)};
    }

    /// Shift by k alpha for a big k, with error bound k * err.
    circle_point orbit(const circle_point& x, const big_int& k) const {
        require(k >= 0, errc::out_of_range, "negative orbit index");
        const big_int e = k * err_ + x.err;
        require(e < big_int(1) << 63, errc::insufficient_precision, "orbit error bound exceeds 2^-193");
        return {x.value + fixed::times(value_, k), static_cast<std::uint64_t>(e)};
    }

private:
    void check_invariants() const {
        for (std::size_t n = 0; n < pq_.depth(); ++n)
            require(pq_.terms[n] >= 1, errc::internal, "partial quotient below 1");
        const big_rational a0(pq_.a0);
        for (std::size_t n = 0; n + 1 < conv_.size(); ++n) {
            const big_rational c = big_rational(conv_[n].p, conv_[n].q) - a0;
            const big_rational qq(conv_[n].q * conv_[n + 1].q);
            const big_rational dev = std::max(abs(lo_ - c), abs(hi_ - c));
            require(dev * qq <= 1, errc::internal, "convergent approximation bound fails at n = " + std::to_string(n));
        }
        // The 256-bit value lies between consecutive convergents while their
        // spacing is resolvable at that width.
        const big_rational v = fixed::to_rational(value_);
        const big_rational ulps(big_int(err_), big_int(1) << fixed_bits);
        for (std::size_t n = 0; n + 1 < conv_.size(); ++n) {
            if (log2_big(conv_[n].q * conv_[n + 1].q) > 200) break;
            big_rational x = big_rational(conv_[n].p, conv_[n].q) - a0;
            big_rational y = big_rational(conv_[n + 1].p, conv_[n + 1].q) - a0;
            if (y < x) std::swap(x, y);
            require(v + ulps >= x && v - ulps <= y, errc::internal, "fixed value outside convergent bracket");
        }
    }

    irrational_spec spec_;
    partial_quotients pq_;
    std::vector<convergent> conv_;
    big_rational lo_, hi_;
    fixed_t value_{0};
    std::uint64_t err_ = 0;
};

namespace detail {

/// Three-valued decision of frac(x + k alpha) <= threshold using the rational
/// enclosures of x and alpha: 1 inside, 0 outside, -1 undecided.
inline int exact_in_interval(const rotation_number& alpha, const circle_point& x, const big_int& k,
                             const big_rational& threshold) {
    const big_rational xr = fixed::to_rational(x.value);
    const big_rational xe(big_int(x.err), big_int(1) << fixed_bits);
    const big_rational lo = xr - xe + big_rational(k) * alpha.lo();
    const big_rational hi = xr + xe + big_rational(k) * alpha.hi();
    const big_int fl = floor(lo);
    if (floor(hi) != fl) return -1;
    const big_rational flo = lo - big_rational(fl);
    const big_rational fhi = hi - big_rational(fl);
    if (fhi <= threshold) return 1;
    if (flo > threshold) return 0;
    return -1;
}

} // namespace detail

/// Least k in [0, q_n] with frac(x + k alpha) in [0, 2/q_n]. Every decision
/// is certified; the result is re-verified against the 512-bit enclosure.
inline std::uint64_t return_time(const rotation_number& alpha, const circle_point& x, std::size_t n) {
    const big_int& qn = alpha.q(n);
    if (qn <= 2) return 0;
    require(qn <= big_int(4000000000ull), errc::size_limit, "return-time scan beyond q_n = 4e9");
    const auto q = static_cast<std::uint64_t>(qn);
    const fixed_t thr = fixed::fraction(big_int(2), qn);
    const big_rational thr_exact(2, qn);
    fixed_t y = x.value;
    std::uint64_t e = x.err;
    const fixed_t step = alpha.value();
    for (std::uint64_t k = 0; k <= q; ++k, y += step, e += alpha.err_ulps()) {
        const fixed_t ef = e + 1;
        bool inside;
        if (y <= thr) {
            if (thr - y > ef && (y >= ef || e == 0)) {
                inside = true;
            } else {
                const int d = detail::exact_in_interval(alpha, x, big_int(k), thr_exact);
                require(d >= 0, errc::insufficient_precision, "return-time decision undecided at k = " + std::to_string(k));
                inside = d == 1;
            }
        } else {
            if (y - thr > ef && fixed_t(fixed_t(0) - y) > ef) {
                inside = false;
            } else {
                const int d = detail::exact_in_interval(alpha, x, big_int(k), thr_exact);
                require(d >= 0, errc::insufficient_precision, "return-time decision undecided at k = " + std::to_string(k));
                inside = d == 1;
            }
        }
        if (inside) {
            require(detail::exact_in_interval(alpha, x, big_int(k), thr_exact) == 1, errc::internal,
                    "return time failed exact re-verification");
            return k;
        }
    }
    fail(errc::internal, "no return within q_n = " + qn.str() + " steps from x = " +
                             format_g17(fixed::to_double(x.value)) + " (three-distance bound violated)");
}

/// Least j >= 1 with frac(x + j alpha) in [0, 2/q_n].
inline std::uint64_t forward_return_time(const rotation_number& alpha, const circle_point& x, std::size_t n) {
    return return_time(alpha, alpha.orbit(x, 1), n) + 1;
}

/// All n in [1, limit] with circle distance(frac(n alpha), frac(beta)) < tol,
/// in increasing order, stopping after max_results when it is nonzero.
/// tol = 0 asks for exact coincidences, decided algebraically for quadratic
/// surds. Throws NotFound when nothing qualifies.
inline std::vector<std::uint64_t> approx_indices(const rotation_number& alpha, const rotation_number& beta,
                                                 double tol, std::uint64_t limit, std::size_t max_results = 0) {
    require(tol >= 0.0 && tol < 0.5, errc::out_of_range, "tolerance must lie in [0, 1/2)");
    require(limit >= 1, errc::out_of_range, "limit must be positive");
    std::vector<std::uint64_t> out;
    if (tol == 0.0) {
        const auto& a = alpha.spec();
        const auto& b = beta.spec();
        using kind = irrational_spec::kind;
        if (a.k == kind::quadratic_surd && b.k == kind::quadratic_surd && a.D == b.D) {
            // n (P1 + sqrt D)/Q1 - (P2 + sqrt D)/Q2 is an integer iff n = Q1/Q2
            // and the rational parts differ by an integer.
            const big_rational n = big_rational(a.Q, b.Q);
            if (n > 0 && denominator(n) == 1 && n <= big_rational(big_int(limit))) {
                const big_rational diff = n * big_rational(a.P, a.Q) - big_rational(b.P, b.Q);
                if (denominator(diff) == 1) out.push_back(static_cast<std::uint64_t>(numerator(n)));
            }
        } else if (a.describe() == b.describe()) {
            out.push_back(1);
        }
        require(!out.empty(), errc::not_found, "no exact coincidence n alpha = beta mod 1 up to the limit");
        return out;
    }
    const fixed_t tf = fixed::from_double(tol);
    const big_rational tol_exact(tol);
    fixed_t y = 0;
    std::uint64_t e = beta.err_ulps();
    const auto exact_check = [&](std::uint64_t n) {
        // Circle distance from frac(n alpha) to frac(beta), enclosed.
        const big_rational lo = big_rational(big_int(n)) * alpha.lo() - beta.hi();
        const big_rational hi = big_rational(big_int(n)) * alpha.hi() - beta.lo();
        const big_rational mid = (lo + hi) / 2;
        const big_rational shift(floor(mid + big_rational(1, 2)));
        const big_rational a = abs(lo - shift), b = abs(hi - shift);
        const big_rational dmax = std::max(a, b);
        const bool straddles = (lo - shift) <= 0 && (hi - shift) >= 0;
        const big_rational dmin = straddles ? big_rational(0) : std::min(a, b);
        if (dmax < tol_exact) return 1;
        if (dmin >= tol_exact) return 0;
        return -1;
    };
    for (std::uint64_t n = 1; n <= limit; ++n) {
        y += alpha.value();
        e += alpha.err_ulps();
        const fixed_t d = fixed::distance(y, beta.value());
        const fixed_t ef = e + 1;
        int decision;
        if (d + ef < tf) {
            decision = 1;
        } else if (d > tf + ef) {
            decision = 0;
        } else {
            decision = exact_check(n);
            require(decision >= 0, errc::insufficient_precision, "distance decision undecided at n = " + std::to_string(n));
        }
        if (decision == 1) {
            require(exact_check(n) == 1, errc::internal, "approximation index failed exact re-verification");
            out.push_back(n);
            if (max_results != 0 && out.size() >= max_results) break;
        }
    }
    require(!out.empty(), errc::not_found, "no index up to the limit approximates beta within tolerance");
    return out;
}

} // namespace ergolab
