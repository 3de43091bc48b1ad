#pragma once

#include "ideals.hpp"
#include "rayclass.hpp"

#include <map>

namespace cmll {

// Coefficient ring O/p^N for a principal prime p = (pi) with q = Np, or
// Z/p^N in the rational case (pi = p, q = p). Elements are canonical
// residues; arithmetic is exact modulo pi^N.
class PadicRing {
public:
    PadicRing(const FieldCtx& ctx, const QuadInt& pi, const Int& q, int prec);

    const FieldCtx& ctx() const { return ctx_; }
    const QuadInt& pi() const { return pi_; }
    const Int& q() const { return q_; }
    int prec() const { return prec_; }
    bool rational() const { return rational_; }
    const FracIdeal& prime() const { return p_; }

    QuadInt reduce(const QuadInt& x) const;
    QuadInt add(const QuadInt& x, const QuadInt& y) const { return reduce(ctx_.add(x, y)); }
    QuadInt sub(const QuadInt& x, const QuadInt& y) const { return reduce(ctx_.sub(x, y)); }
    QuadInt mul(const QuadInt& x, const QuadInt& y) const { return reduce(ctx_.mul(x, y)); }
    QuadInt neg(const QuadInt& x) const { return reduce(ctx_.neg(x)); }
    QuadInt pow(const QuadInt& x, const Int& e) const;
    bool is_zero(const QuadInt& x) const { return reduce(x).is_zero(); }

    // valuation truncated at prec (returns prec for 0)
    int val(const QuadInt& x) const;
    bool is_unit(const QuadInt& x) const { return val(x) == 0; }
    QuadInt inv_unit(const QuadInt& x) const;
    // exact division by pi; class is defined modulo p^(prec-1)
    QuadInt div_pi(const QuadInt& x) const;

    // Teichmueller representative: the limit of r^(q^k).
    QuadInt teichmuller(const QuadInt& r) const;

    // Ring with the same parameters at a different precision.
    PadicRing at_precision(int prec) const { return PadicRing(ctx_, pi_, q_, prec); }

private:
    FieldCtx ctx_;
    QuadInt pi_;
    Int q_;
    int prec_;
    bool rational_;
    FracIdeal p_;
    Int A_, B_, C_; // HNF of p^prec
    QuadInt div_pi_raw(const QuadInt& x) const;
};

// Truncated power series sum c[i] T^i over a PadicRing, degree cutoff
// c.size() - 1.
struct PSeries {
    std::vector<QuadInt> c;
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

PSeries ps_make(const PadicRing& R, std::vector<QuadInt> coeffs, int cutoff);
PSeries ps_zero(const PadicRing& R, int cutoff);
PSeries ps_add(const PadicRing& R, const PSeries& f, const PSeries& g);
PSeries ps_sub(const PadicRing& R, const PSeries& f, const PSeries& g);
PSeries ps_mul(const PadicRing& R, const PSeries& f, const PSeries& g, int cutoff);
PSeries ps_scale(const PadicRing& R, const QuadInt& k, const PSeries& f);
// f(g) for pointed g (g(0) = 0)
PSeries ps_compose(const PadicRing& R, const PSeries& f, const PSeries& g, int cutoff);
bool ps_eq(const PadicRing& R, const PSeries& f, const PSeries& g);
PSeries ps_truncate(const PadicRing& R, const PSeries& f, int cutoff);

// Sparse truncated polynomial in 2 or 3 variables (total-degree cutoff).
struct TruncPoly {
    int nvars{2};
    int cutoff{0};
    std::map<std::vector<int>, QuadInt> t;
};

TruncPoly tp_zero(const PadicRing& R, int nvars, int cutoff);
TruncPoly tp_var(const PadicRing& R, int nvars, int cutoff, int i);
TruncPoly tp_add(const PadicRing& R, const TruncPoly& f, const TruncPoly& g);
TruncPoly tp_sub(const PadicRing& R, const TruncPoly& f, const TruncPoly& g);
TruncPoly tp_mul(const PadicRing& R, const TruncPoly& f, const TruncPoly& g);
TruncPoly tp_scale(const PadicRing& R, const QuadInt& k, const TruncPoly& f);
bool tp_eq(const PadicRing& R, const TruncPoly& f, const TruncPoly& g);
// Substitute vals[i] for variable i (vals pointed: zero constant term).
TruncPoly tp_subst(const PadicRing& R, const TruncPoly& f, const std::vector<TruncPoly>& vals);
// Univariate series as an nvars-variate truncated polynomial in variable i.
TruncPoly tp_from_series(const PadicRing& R, const PSeries& s, int nvars, int cutoff, int i);
// Coefficient extraction into a univariate series in variable i (other
// variables must not occur).
PSeries tp_to_series(const PadicRing& R, const TruncPoly& f, int cutoff);

// A Lubin-Tate formal O-module presented by a structural series f with
// f = pi T mod deg 2 and f = T^q mod pi. The group law and the
// endomorphism series are solved degree by degree; at each degree the
// defining equation has a unique solution because the correction scales by
// pi^r - pi whose unit part is invertible. All data is computed at a padded
// internal precision and reported modulo pi^prec.
class LubinTateModule {
public:
    // f_exact: exact coefficients of the structural series (index = degree).
    LubinTateModule(const FieldCtx& ctx, const QuadInt& pi, const Int& q,
                    const std::vector<QuadInt>& f_exact, int deg, int prec,
                    int assoc_check_deg = 0);

    static std::vector<QuadInt> canonical_f(const FieldCtx& ctx, const QuadInt& pi, const Int& q);
    // (1+T)^p - 1 (rational pi = p only)
    static std::vector<QuadInt> multiplicative_f(const FieldCtx& ctx, const Int& p);

    const PadicRing& ring() const { return Rout_; }      // output precision
    const PadicRing& work_ring() const { return Rw_; }   // padded precision
    int degree_cutoff() const { return D_; }
    const std::vector<QuadInt>& f_exact() const { return f_exact_; }

    // structural series and group law at output precision
    PSeries pi_series() const;
    TruncPoly group_law() const;

    // [a](T) for a in O (or a ring element multiplier, e.g. Teichmueller).
    PSeries endo(const QuadInt& a) const;

    // F evaluated at two pointed series.
    PSeries add_points(const PSeries& x, const PSeries& y) const;

    // internal (work-precision) data for checks
    const TruncPoly& group_law_work() const { return F_; }
    PSeries endo_work(const QuadInt& a) const;

private:
    FieldCtx ctx_;
    std::vector<QuadInt> f_exact_;
    int D_;
    PadicRing Rw_, Rout_;
    PSeries f_; // at work precision
    TruncPoly F_;
    mutable std::map<std::pair<Int, Int>, PSeries> endo_cache_;

    PSeries solve_commuting(const PSeries& lhs_f, const PSeries& rhs_f,
                            const QuadInt& linear) const;
};

// [pi^n](T) = T^(q^n) mod pi for 0 <= n <= nmax, checked at degree q^nmax.
CheckReport frobenius_congruence_check(const LubinTateModule& M, int nmax);

struct TorsionData {
    PSeries pin;        // [pi^n](T), exact polynomial composition
    PSeries quotient;   // [pi^n]/[pi^(n-1)]
    Int quotient_degree;
    bool eisenstein;    // quotient is Eisenstein at output precision
};

// Requires the structural series to be a polynomial and q^n within the cap.
TorsionData torsion_polynomial(const LubinTateModule& M, int n, int degree_cap = 4096);

// Isomorphism with linear coefficient u (a unit): phi with
// phi([pi]_1) = [pi]_2(phi). Returns nullopt when the solve obstructs.
std::optional<PSeries> lt_isomorphism(const LubinTateModule& M1, const LubinTateModule& M2,
                                      const QuadInt& u);

} // namespace cmll
