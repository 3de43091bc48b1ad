#include "quadfield.hpp"

#include <cassert>

namespace cmll {

FieldCtx::FieldCtx(const Int& d) : d_(d)
{
    if (d <= 0)
        throw ValidationError("d must be a positive integer");
    if (!is_squarefree(d))
        throw ValidationError("d must be squarefree");
    if (mod_floor(d, 4) == 3) {
        kind_ = OmegaKind::HALF;
        disc_ = -d;
        m_ = (1 + d) / 4;
    } else {
        kind_ = OmegaKind::SQRT;
        disc_ = -4 * d;
        m_ = 0;
    }
    w_ = d == 1 ? 4 : d == 3 ? 6 : 2;
}

FieldCtx make_field(const Int& d)
{
    return FieldCtx(d);
}

QuadInt FieldCtx::mul(const QuadInt& x, const QuadInt& y) const
{
    Int cross = x.a * y.b + x.b * y.a;
    if (kind_ == OmegaKind::SQRT)
        return {x.a * y.a - d_ * x.b * y.b, cross};
    return {x.a * y.a - m_ * x.b * y.b, cross + x.b * y.b};
}

QuadInt FieldCtx::conj(const QuadInt& x) const
{
    if (kind_ == OmegaKind::SQRT)
        return {x.a, -x.b};
    return {x.a + x.b, -x.b};
}

Int FieldCtx::norm(const QuadInt& x) const
{
    if (kind_ == OmegaKind::SQRT)
        return x.a * x.a + d_ * x.b * x.b;
    return x.a * x.a + x.a * x.b + m_ * x.b * x.b;
}

Int FieldCtx::trace(const QuadInt& x) const
{
    if (kind_ == OmegaKind::SQRT)
        return 2 * x.a;
    return 2 * x.a + x.b;
}

QuadInt FieldCtx::pow(const QuadInt& x, const Int& e) const
{
    if (e < 0)
        throw ValidationError("QuadInt pow: negative exponent");
    QuadInt r{1, 0}, base = x;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

KElem FieldCtx::make_elem(const QuadInt& num, const Int& den) const
{
    if (den == 0)
        throw ValidationError("field element with zero denominator");
    KElem r{num, den};
    if (r.den < 0) {
        r.den = -r.den;
        r.num = neg(r.num);
    }
    Int g = gcd(gcd(abs(r.num.a), abs(r.num.b)), r.den);
    if (g > 1) {
        r.num.a /= g;
        r.num.b /= g;
        r.den /= g;
    }
    return r;
}

KElem FieldCtx::k_add(const KElem& x, const KElem& y) const
{
    return make_elem({x.num.a * y.den + y.num.a * x.den, x.num.b * y.den + y.num.b * x.den},
                     x.den * y.den);
}

KElem FieldCtx::k_sub(const KElem& x, const KElem& y) const
{
    return k_add(x, k_neg(y));
}

KElem FieldCtx::k_mul(const KElem& x, const KElem& y) const
{
    return make_elem(mul(x.num, y.num), x.den * y.den);
}

KElem FieldCtx::k_inv(const KElem& x) const
{
    if (x.is_zero())
        throw ValidationError("division by zero in K");
    // 1/(n/d) = d * conj(n) / N(n)
    return make_elem(mul_int(conj(x.num), x.den), norm(x.num));
}

Rat FieldCtx::k_norm(const KElem& x) const
{
    Rat r(norm(x.num), x.den * x.den);
    r.canonicalize();
    return r;
}

std::vector<QuadInt> FieldCtx::unit_group() const
{
    if (d_ == 1)
        return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    if (d_ == 3) {
        // powers of w = (1+sqrt(-3))/2, a primitive 6th root of unity
        std::vector<QuadInt> us{{1, 0}};
        QuadInt w{0, 1};
        for (int i = 1; i < 6; ++i)
            us.push_back(mul(us.back(), w));
        return us;
    }
    return {{1, 0}, {-1, 0}};
}

std::string FieldCtx::format(const QuadInt& x)
{
    return x.a.get_str() + "+" + x.b.get_str() + "*w";
}

std::string FieldCtx::format(const KElem& x)
{
    std::string s = format(x.num);
    if (x.den != 1)
        s += "/" + x.den.get_str();
    return s;
}

namespace {

Int parse_int_span(const std::string& s, size_t& i)
{
    size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i])))
        ++i;
    if (i == start || (i == start + 1 && !isdigit(static_cast<unsigned char>(s[start]))))
        throw ValidationError("cannot parse integer in element string: " + s);
    return Int(s.substr(start, i - start));
}

} // namespace

QuadInt FieldCtx::parse_quadint(const std::string& s)
{
    size_t i = 0;
    Int a = parse_int_span(s, i);
    if (i == s.size())
        return {a, 0};
    if (s[i] != '+')
        throw ValidationError("malformed element string: " + s);
    ++i;
    Int b = parse_int_span(s, i);
    if (s.substr(i) != "*w")
        throw ValidationError("malformed element string: " + s);
    return {a, b};
}

KElem FieldCtx::parse_elem(const std::string& s)
{
    auto slash = s.find('/');
    QuadInt num = parse_quadint(slash == std::string::npos ? s : s.substr(0, slash));
    Int den = 1;
    if (slash != std::string::npos) {
        size_t i = 0;
        std::string ds = s.substr(slash + 1);
        den = parse_int_span(ds, i);
        if (i != ds.size() || den <= 0)
            throw ValidationError("malformed denominator in: " + s);
    }
    KElem e{num, den};
    return e;
}

} // namespace cmll
