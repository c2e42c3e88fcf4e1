#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "necw/errors.hpp"

namespace necw {

// A field element, packed as an integer in [0, q).  The digits of the value
// in base p are the coefficients of the representing polynomial, constant
// term least significant.
using fel = std::uint32_t;

namespace detail {

inline bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense polynomial over GF(p), coefficients ascending.  Only used during
// field construction; runtime arithmetic goes through the log tables.
using Poly = std::vector<unsigned>;

inline Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return poly_trim(std::move(c));
}

// Remainder of a by monic b.
inline Poly poly_mod(Poly a, const Poly& b, unsigned p) {
    a = poly_trim(std::move(a));
    while (a.size() >= b.size()) {
        unsigned lead = a.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            unsigned sub = (lead * b[i]) % p;
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        a = poly_trim(std::move(a));
    }
    return a;
}

inline std::string poly_to_string(const Poly& a) {
    // Human-readable "x^2+x+1" style, highest degree first.
    if (a.empty()) return "0";
    std::string s;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || a[i] != 1) s += std::to_string(a[i]);
        if (i >= 1) s += "x";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

}  // namespace detail

// GF(p^m) with exact table-driven arithmetic.  Immutable after construction;
// safe to share across threads.
class Field {
public:
    // poly: monic coefficients ascending, size m+1.  Empty picks the default
    // irreducible polynomial: the monic degree-m polynomial whose lower
    // coefficients, read as a base-p integer, are smallest.
    static std::shared_ptr<const Field> make(unsigned p, unsigned m,
                                             std::vector<unsigned> poly = {}) {
        return std::shared_ptr<const Field>(new Field(p, m, std::move(poly)));
    }

    // Accepts "p^m", "p^m/c0,c1,...,cm" or a plain prime power "q".
    static std::shared_ptr<const Field> parse(const std::string& s) {
        std::string head = s;
        std::vector<unsigned> poly;
        if (auto slash = s.find('/'); slash != std::string::npos) {
            head = s.substr(0, slash);
            std::stringstream cs(s.substr(slash + 1));
            std::string tok;
            while (std::getline(cs, tok, ','))
                poly.push_back(static_cast<unsigned>(std::stoul(tok)));
        }
        unsigned p = 0, m = 1;
        if (auto caret = head.find('^'); caret != std::string::npos) {
            p = static_cast<unsigned>(std::stoul(head.substr(0, caret)));
            m = static_cast<unsigned>(std::stoul(head.substr(caret + 1)));
        } else {
            // Plain q: factor as p^m.
            unsigned q = static_cast<unsigned>(std::stoul(head));
            if (q < 2) throw validation_error("field size must be at least 2");
            unsigned base = 2;
            while (base * base <= q && q % base != 0) ++base;
            if (base * base > q) base = q;  // q itself prime
            p = base;
            m = 0;
            unsigned acc = 1;
            while (acc < q) {
                acc *= p;
                ++m;
            }
            if (acc != q)
                throw validation_error("'" + head + "' is not a prime power");
        }
        return make(p, m, std::move(poly));
    }

    unsigned p() const { return p_; }
    unsigned m() const { return m_; }
    fel q() const { return q_; }
    const std::vector<unsigned>& poly() const { return poly_; }

    bool same(const Field& other) const {
        return p_ == other.p_ && m_ == other.m_ && poly_ == other.poly_;
    }

    fel add(fel a, fel b) const {
        if (p_ == 2) return a ^ b;
        fel r = 0, scale = 1;
        for (unsigned i = 0; i < m_; ++i) {
            r += scale * ((a % p_ + b % p_) % p_);
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return r;
    }

    fel neg(fel a) const {
        if (p_ == 2) return a;
        fel r = 0, scale = 1;
        for (unsigned i = 0; i < m_; ++i) {
            unsigned d = a % p_;
            r += scale * (d ? p_ - d : 0);
            a /= p_;
            scale *= p_;
        }
        return r;
    }

    fel sub(fel a, fel b) const { return add(a, neg(b)); }

    fel mul(fel a, fel b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[(log_[a] + log_[b]) % (q_ - 1)];
    }

    fel inv(fel a) const {
        if (a == 0) throw validation_error("division by zero in GF(" + std::to_string(q_) + ")");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    fel div(fel a, fel b) const { return mul(a, inv(b)); }

    fel pow(fel a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        return exp_[static_cast<fel>((log_[a] * (e % (q_ - 1))) % (q_ - 1))];
    }

    // The residue class of x; the paper-style primitive symbol for the
    // default binary polynomials (e.g. alpha in GF(4) with x^2+x+1).
    fel x_element() const { return m_ >= 2 ? p_ : 1; }

    // A multiplicative generator (smallest packed value with order q-1).
    fel generator() const { return gen_; }

    std::string spec_string() const {
        std::string s = std::to_string(p_) + "^" + std::to_string(m_) + "/";
        for (std::size_t i = 0; i < poly_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(poly_[i]);
        }
        return s;
    }

    fel parse_scalar(const std::string& tok) const {
        unsigned long v = std::stoul(tok);
        if (v >= q_) throw validation_error("scalar " + tok + " out of range for GF(" + std::to_string(q_) + ")");
        return static_cast<fel>(v);
    }

private:
    Field(unsigned p, unsigned m, std::vector<unsigned> poly) : p_(p), m_(m) {
        if (!detail::is_prime(p))
            throw validation_error(std::to_string(p) + " is not prime");
        if (m < 1) throw validation_error("extension degree must be >= 1");
        std::uint64_t q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= p;
            if (q > 65536) throw validation_error("field size exceeds 2^16");
        }
        q_ = static_cast<fel>(q);

        if (poly.empty())
            poly_ = default_poly();
        else {
            poly_ = std::move(poly);
            validate_poly();
        }
        build_tables();
    }

    void validate_poly() const {
        if (poly_.size() != m_ + 1 || poly_.back() != 1)
            throw validation_error("reduction polynomial must be monic of degree " + std::to_string(m_));
        for (unsigned c : poly_)
            if (c >= p_) throw validation_error("polynomial coefficient out of range");
        if (m_ == 1) return;
        if (auto f = find_factor(poly_))
            throw validation_error("polynomial " + detail::poly_to_string(poly_) +
                                   " is reducible over GF(" + std::to_string(p_) +
                                   "): divisible by " + detail::poly_to_string(*f));
    }

    // Trial division by every monic polynomial of degree 1..m/2.
    std::optional<detail::Poly> find_factor(const detail::Poly& f) const {
        for (unsigned d = 1; 2 * d <= m_; ++d) {
            std::uint64_t count = 1;
            for (unsigned i = 0; i < d; ++i) count *= p_;
            for (std::uint64_t c = 0; c < count; ++c) {
                detail::Poly g(d + 1, 0);
                std::uint64_t v = c;
                for (unsigned i = 0; i < d; ++i) {
                    g[i] = static_cast<unsigned>(v % p_);
                    v /= p_;
                }
                g[d] = 1;
                if (detail::poly_mod(f, g, p_).empty()) return g;
            }
        }
        return std::nullopt;
    }

    detail::Poly default_poly() const {
        if (m_ == 1) return {0, 1};  // reduction is just mod p
        std::uint64_t count = 1;
        for (unsigned i = 0; i < m_; ++i) count *= p_;
        for (std::uint64_t c = 0; c < count; ++c) {
            detail::Poly g(m_ + 1, 0);
            std::uint64_t v = c;
            for (unsigned i = 0; i < m_; ++i) {
                g[i] = static_cast<unsigned>(v % p_);
                v /= p_;
            }
            g[m_] = 1;
            if (!find_factor(g)) return g;
        }
        throw infeasible_error("no irreducible polynomial found");  // unreachable
    }

    fel mul_slow(fel a, fel b) const {
        if (m_ == 1) return static_cast<fel>((std::uint64_t(a) * b) % p_);
        detail::Poly pa = unpack(a), pb = unpack(b);
        return pack(detail::poly_mod(detail::poly_mul(pa, pb, p_), poly_, p_));
    }

    detail::Poly unpack(fel a) const {
        detail::Poly v(m_, 0);
        for (unsigned i = 0; i < m_; ++i) {
            v[i] = a % p_;
            a /= p_;
        }
        return detail::poly_trim(std::move(v));
    }

    fel pack(const detail::Poly& v) const {
        fel r = 0, scale = 1;
        for (std::size_t i = 0; i < v.size(); ++i) {
            r += scale * v[i];
            scale *= p_;
        }
        return r;
    }

    void build_tables() {
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        for (fel g = 1; g < q_; ++g) {
            fel x = 1;
            fel order = 0;
            do {
                x = mul_slow(x, g);
                ++order;
            } while (x != 1);
            if (order == q_ - 1) {
                gen_ = g;
                fel acc = 1;
                for (fel i = 0; i < q_ - 1; ++i) {
                    exp_[i] = acc;
                    log_[acc] = i;
                    acc = mul_slow(acc, g);
                }
                return;
            }
        }
        throw infeasible_error("no multiplicative generator found");  // unreachable
    }

    unsigned p_, m_;
    fel q_ = 0, gen_ = 1;
    std::vector<unsigned> poly_;
    std::vector<fel> exp_, log_;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace necw
