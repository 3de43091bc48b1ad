#pragma once

#include "rayclass.hpp"

#include <map>
#include <variant>

namespace cmll {

// --- pi-typical parameters ---------------------------------------------------
//
// Witt coordinates are taken at a principal prime (pi) with residue field of
// size q: either pi = p a rational prime acting on Z-typical vectors (q = p),
// or pi in O_K generating a prime ideal with N(pi) = q.

struct WittParams {
    FieldCtx ctx;
    QuadInt pi;
    Int q;
    int len; // number of coordinates x_0 .. x_{len-1}
    bool rational;
};

WittParams make_witt_params(const FieldCtx& ctx, const QuadInt& pi, const Int& q, int len);

// --- sparse multivariate polynomials over K ----------------------------------

using Mono = std::vector<int>;

struct MPoly {
    int nvars{0};
    std::map<Mono, KElem> terms;
};

MPoly mp_const(const FieldCtx& ctx, int nvars, const KElem& c);
MPoly mp_var(const FieldCtx& ctx, int nvars, int i);
MPoly mp_add(const FieldCtx& ctx, const MPoly& f, const MPoly& g);
MPoly mp_sub(const FieldCtx& ctx, const MPoly& f, const MPoly& g);
MPoly mp_mul(const FieldCtx& ctx, const MPoly& f, const MPoly& g);
MPoly mp_pow(const FieldCtx& ctx, const MPoly& f, const Int& e);
MPoly mp_scale(const FieldCtx& ctx, const MPoly& f, const KElem& c);
bool mp_integral(const MPoly& f, bool rational_mode);

// Universal addition and multiplication polynomials S_m, P_m (m < len) in the
// variables X_0..X_{len-1}, Y_0..Y_{len-1} (Y after X), solved from the ghost
// equations over K. All coefficients must land in O (hard error otherwise).
struct WittPolynomials {
    WittParams par;
    std::vector<MPoly> S, P;
};

WittPolynomials witt_polynomials(const WittParams& par, int cap = 4);

// --- carriers -----------------------------------------------------------------

using PolyT = std::vector<QuadInt>; // polynomial in T over O_K (or Z)

using CElem = std::variant<QuadInt, PolyT>;

enum class CarrierKind {
    ZZ,      // integers (QuadInt with b = 0)
    OK,      // O_K
    OKPolyT, // O_K[T] with monomial Frobenius lifts T -> T^(Na) (customizable)
    OKModPN, // O_K/p^N truncations, for congruence checks only (not flat)
};

// A Frobenius lift at a prime p. For scalar carriers the canonical lift is
// the identity; for O_K[T] it sends T to t_image (default T^(Np)).
struct FrobLift {
    FracIdeal p;
    std::optional<PolyT> t_image;
};

class Carrier {
public:
    static Carrier integers(const FieldCtx& ctx);
    static Carrier ok(const FieldCtx& ctx);
    static Carrier ok_poly(const FieldCtx& ctx);
    static Carrier ok_mod_pn(const FieldCtx& ctx, const QuadInt& pi, int N);

    CarrierKind kind() const { return kind_; }
    const FieldCtx& ctx() const { return ctx_; }
    bool flat() const { return kind_ != CarrierKind::OKModPN; }

    CElem from_int(long v) const;
    CElem from_quadint(const QuadInt& x) const;
    CElem var_t() const; // OKPolyT only

    CElem add(const CElem& x, const CElem& y) const;
    CElem sub(const CElem& x, const CElem& y) const;
    CElem mul(const CElem& x, const CElem& y) const;
    CElem neg(const CElem& x) const;
    CElem scalar_mul(const QuadInt& k, const CElem& x) const;
    CElem pow(const CElem& x, const Int& e) const;
    bool eq(const CElem& x, const CElem& y) const;
    bool is_zero(const CElem& x) const;

    // Membership in J*A for an integral ideal J (coefficientwise for O_K[T]).
    bool in_ideal(const CElem& x, const FracIdeal& J) const;

    // Apply the Frobenius lift at lift.p.
    CElem psi(const FrobLift& lift, const CElem& x) const;

    // Exact division by pi (rational mode: by the integer pi.a). Throws
    // InternalError when the division is not exact.
    CElem div_pi(const CElem& x, const QuadInt& pi, const Int& q, bool rational) const;

    std::string str(const CElem& x) const;

private:
    Carrier(CarrierKind kind, const FieldCtx& ctx) : kind_(kind), ctx_(ctx) {}
    CarrierKind kind_;
    FieldCtx ctx_;
    QuadInt pi_{0, 0};
    int prec_{0};
    FracIdeal modulus_; // p^N for OKModPN
    QuadInt reduce(const QuadInt& x) const;
};

// --- Witt and ghost vectors ---------------------------------------------------

struct WittVector {
    WittParams par;
    std::vector<CElem> coords;
};

struct GhostVector {
    WittParams par;
    std::vector<CElem> comps;
};

// gh_m = sum_{i<=m} pi^i x_i^(q^(m-i)).
GhostVector ghost_map(const Carrier& car, const WittVector& w);

WittVector witt_add(const Carrier& car, const WittPolynomials& wp, const WittVector& x,
                    const WittVector& y);
WittVector witt_mul(const Carrier& car, const WittPolynomials& wp, const WittVector& x,
                    const WittVector& y);

// Evaluate an integral MPoly at carrier values (variable i -> vals[i]).
CElem mp_eval(const Carrier& car, const MPoly& f, const std::vector<CElem>& vals);

// --- delta rings ----------------------------------------------------------------

struct DeltaRing {
    Carrier carrier;
    WittParams par; // pi, q
    FrobLift lift;
};

DeltaRing make_delta_ring(const Carrier& car, const WittParams& par,
                          std::optional<PolyT> t_image = std::nullopt);

// delta(a) = (psi(a) - a^q) / pi, exact.
CElem delta(const DeltaRing& R, const CElem& a);

// psi(a) = a^q + pi*delta(a): the Frobenius lift recovered from delta.
CElem psi_from_delta(const DeltaRing& R, const CElem& a);

// Lambda-structure verification: pairwise commutation of the lifts and the
// Frobenius congruence psi_p(a) = a^(Np) mod p on the samples.
struct LambdaReport {
    bool commutation_pass{true};
    bool congruence_pass{true};
    std::vector<std::string> failures;
    bool pass() const { return commutation_pass && congruence_pass; }
};

LambdaReport verify_lambda(const Carrier& car, const std::vector<FrobLift>& lifts,
                           const std::vector<CElem>& samples);

// Dwork congruences: psi(gh_m) = gh_{m+1} mod pi^{m+1} for m < len-1.
// Requires a flat carrier; for such carriers with a verified lift this holds
// iff the vector is a ghost image.
bool dwork_membership(const Carrier& car, const GhostVector& g, const FrobLift& lift);

// --- coprime index factorization ------------------------------------------------

// All divisors of an integral ideal, sorted by (norm, HNF).
std::vector<FracIdeal> ideal_divisors(const FieldCtx& ctx, const FracIdeal& a);

// General-index ghost family over the divisors of an ideal, with identity
// lifts on a scalar carrier.
struct IndexedGhost {
    FracIdeal modulus;                 // index set = divisors(modulus)
    std::vector<FracIdeal> index;      // sorted divisors
    std::vector<CElem> comps;          // one per index entry
};

// Dwork congruences over a general divisor-closed index set.
bool indexed_dwork(const Carrier& car, const FieldCtx& ctx, const IndexedGhost& g);

// Gamma_{ab}(A) = Gamma_a(Gamma_b(A)) for coprime a, b: index bijection
// divisors(ab) = divisors(a) x divisors(b), and the Dwork predicate factors
// through the bijection on the sample families.
CheckReport coprime_factorization_check(const FieldCtx& ctx, const FracIdeal& a,
                                        const FracIdeal& b, const Carrier& car,
                                        int samples = 8);

} // namespace cmll
