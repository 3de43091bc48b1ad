#pragma once

#include "intmath.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmll {

// K = Q(sqrt(-d)), O_K = Z[w] with
//   w = sqrt(-d)       (d = 1, 2 mod 4),  w^2 = -d
//   w = (1+sqrt(-d))/2 (d = 3 mod 4),     w^2 = w - (1+d)/4
// We fix the embedding with Im(w) > 0.

enum class OmegaKind { SQRT, HALF };

// a + b*w with integer a, b.
struct QuadInt {
    Int a{0}, b{0};
    QuadInt() = default;
    QuadInt(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
    bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
    bool operator!=(const QuadInt& o) const { return !(*this == o); }
    bool is_zero() const { return a == 0 && b == 0; }
};

// Element of K: num/den in lowest terms, den > 0.
struct KElem {
    QuadInt num;
    Int den{1};
    bool operator==(const KElem& o) const { return num == o.num && den == o.den; }
    bool operator!=(const KElem& o) const { return !(*this == o); }
    bool is_zero() const { return num.is_zero(); }
};

class FieldCtx {
public:
    // d >= 1 squarefree; throws ValidationError otherwise.
    explicit FieldCtx(const Int& d);

    const Int& d() const { return d_; }
    const Int& disc() const { return disc_; }
    OmegaKind omega_kind() const { return kind_; }
    int w() const { return w_; }
    // m with w^2 = w - m (HALF case only).
    const Int& half_m() const { return m_; }

    bool operator==(const FieldCtx& o) const { return d_ == o.d_; }

    // --- element arithmetic ----------------------------------------------
    QuadInt add(const QuadInt& x, const QuadInt& y) const { return {x.a + y.a, x.b + y.b}; }
    QuadInt sub(const QuadInt& x, const QuadInt& y) const { return {x.a - y.a, x.b - y.b}; }
    QuadInt neg(const QuadInt& x) const { return {-x.a, -x.b}; }
    QuadInt mul(const QuadInt& x, const QuadInt& y) const;
    QuadInt mul_int(const QuadInt& x, const Int& k) const { return {x.a * k, x.b * k}; }
    QuadInt conj(const QuadInt& x) const;
    Int norm(const QuadInt& x) const;
    Int trace(const QuadInt& x) const;
    QuadInt pow(const QuadInt& x, const Int& e) const;

    // --- field elements ----------------------------------------------------
    KElem make_elem(const QuadInt& num, const Int& den) const;
    KElem k_add(const KElem& x, const KElem& y) const;
    KElem k_sub(const KElem& x, const KElem& y) const;
    KElem k_mul(const KElem& x, const KElem& y) const;
    KElem k_neg(const KElem& x) const { return {neg(x.num), x.den}; }
    KElem k_inv(const KElem& x) const;
    KElem k_div(const KElem& x, const KElem& y) const { return k_mul(x, k_inv(y)); }
    KElem k_conj(const KElem& x) const { return {conj(x.num), x.den}; }
    Rat k_norm(const KElem& x) const;
    bool is_integral(const KElem& x) const { return x.den == 1; }

    // All w units, first element 1, closed under mult and conjugation.
    std::vector<QuadInt> unit_group() const;

    // --- serialization ------------------------------------------------------
    // "a+b*w" with decimal integers, e.g. "3+-2*w"; field elements "a+b*w/den".
    static std::string format(const QuadInt& x);
    static std::string format(const KElem& x);
    static QuadInt parse_quadint(const std::string& s);
    static KElem parse_elem(const std::string& s);

private:
    Int d_, disc_, m_;
    OmegaKind kind_;
    int w_;
};

// d -> FieldCtx, validating d squarefree and positive.
FieldCtx make_field(const Int& d);

} // namespace cmll
