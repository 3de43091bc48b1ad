#pragma once

#include "ideals.hpp"

#include <mpfr.h>

#include <string>
#include <vector>

namespace cmll {

// Thin RAII wrapper over mpfr_t.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    BigFloat(const BigFloat& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    BigFloat& operator=(const BigFloat& o)
    {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    ~BigFloat() { mpfr_clear(x_); }
    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

private:
    mpfr_t x_;
};

struct BigComplex {
    BigFloat re, im;
    explicit BigComplex(mpfr_prec_t prec) : re(prec), im(prec) {}
};

// Exact tau data for a lattice: tau = (a + b*w)/den reduced into the standard
// fundamental domain (|Re| <= 1/2, |tau| >= 1, with the boundary conventions
// Re in [-1/2, 1/2) and Re <= 0 on |tau| = 1).
struct TauData {
    QuadInt num;
    Int den;
    Rat re;       // exact real part
    Rat im_coeff; // Im(tau) = im_coeff * sqrt(d)
};

TauData tau_reduce(const FieldCtx& ctx, const FracIdeal& lattice);

struct JValue {
    BigComplex j;
    std::string error_bound; // rigorous bound on |computed - true|, decimal
    JValue(mpfr_prec_t prec) : j(prec) {}
};

// j(tau) by the q-expansion with a rigorous truncation bound.
JValue j_eval(const FieldCtx& ctx, const TauData& tau, long bits);

JValue j_invariant(const FieldCtx& ctx, const FracIdeal& lattice, long bits);

struct HilbertData {
    std::vector<Int> coeffs; // ascending degree, monic
    std::string residual;    // max |coefficient - nearest integer|, decimal
    long bits;
};

// prod over class representatives of (X - j(C/a_i)); fails demanding more
// precision when the rounding residual is not below 1e-10.
HilbertData hilbert_class_polynomial(const FieldCtx& ctx, long bits,
                                     const std::vector<FracIdeal>& class_reps);

// j to a decimal string with the given number of digits (deterministic).
std::string j_decimal(const JValue& v, int digits);

} // namespace cmll
