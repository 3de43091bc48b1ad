#pragma once

#include "rayclass.hpp"

namespace cmll {

// Prime ideals p_1..p_r, coprime to the auxiliary modulus g, whose bracket
// classes realize CL^(f) as a direct sum of cyclic groups of orders n_i.
struct GeneratorData {
    const RayClassGroup* G;
    FracIdeal g;
    std::vector<FracIdeal> primes;
    std::vector<Int> orders;
    std::vector<long> gen_elems;            // [p_i]_f
    std::vector<std::vector<long>> coords;  // group element -> exponents
};

GeneratorData choose_generators(const RayClassGroup& G, const FracIdeal& g,
                                const Int& search_bound = Int(1000));

// a = gamma(a) * prod p_i^(x_i) with gamma(a) principal, generated by an
// element = 1 mod f and coprime to g, and 0 <= x_i < n_i.
struct Decomposition {
    FracIdeal input;
    FracIdeal gamma;
    KElem generator; // certified: (generator) = gamma, generator = 1 mod f
    std::vector<long> exps;
};

Decomposition decompose(const GeneratorData& data, const FracIdeal& a);

// The three multiplicative relations for gamma, exhaustively over integral
// ideals of norm <= bound coprime to g.
CheckReport relation_checks(const GeneratorData& data, const Int& bound);

// Formal word l(gamma) * A^(e_A) * prod alpha_i^(e_i) with e_A in Z[G] and
// e_i in Z[<sigma_i>]; sigma_j fixes alpha_i for j != i, and the only rewrite
// rule is N_i(alpha_i) -> l(p_i^(n_i)).
struct SymbolicWord {
    FracIdeal l_part;                    // element of Prin_{1 mod f}^{(g)}
    std::map<long, Int> A_exp;           // group element index -> coefficient
    std::vector<std::vector<Int>> alpha; // alpha[i][j]: coefficient of sigma_i^j
};

SymbolicWord symbolic_extension(const GeneratorData& data, const FracIdeal& a);
SymbolicWord word_mul(const GeneratorData& data, const SymbolicWord& x, const SymbolicWord& y);
SymbolicWord word_inv(const GeneratorData& data, const SymbolicWord& x);
// Galois action of the group element sigma on a word.
SymbolicWord word_act(const GeneratorData& data, long sigma, const SymbolicWord& x);
// Confluent normal form: each alpha_i reduced modulo the norm element
// (entry 0 cleared), transfers absorbed into the l-part.
SymbolicWord word_normalize(const GeneratorData& data, const SymbolicWord& x);
bool word_is_identity(const GeneratorData& data, const SymbolicWord& x);

// l(a) sigma_a(l(b)) = l(ab) after normalization; also checks the exponent
// bookkeeping z_i = x_i + y_i - delta_i n_i with delta_i in {0,1}.
CheckReport cocycle_verify(const GeneratorData& data, const FracIdeal& a, const FracIdeal& b);

// All coprime-to-g pairs with norms up to the bound.
CheckReport cocycle_sweep(const GeneratorData& data, const Int& bound);

} // namespace cmll
